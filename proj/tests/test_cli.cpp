#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "flipproc/equivalence.hpp"
#include "flipproc/json_io.hpp"
#include "flipproc/named_rules.hpp"
#include "flipproc/uniqueness.hpp"

using namespace flipproc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "flipproc");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string rule(const std::string& name) { return std::string(FLIPPROC_DATA_DIR) + "/rules/" + name + ".json"; }

std::string kernel(const std::string& name) {
  return std::string(FLIPPROC_DATA_DIR) + "/kernels/" + name + ".json";
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string golden(const std::string& name) { return slurp(fs::path(FLIPPROC_GOLDEN_DIR) / name); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "flipproc-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("compare exit codes and certificates") {
  const Outcome differ = run({"compare", rule("triangle-removal"), rule("identity3")});
  CHECK(differ.code == cli::kNegative);
  CHECK(differ.err.find("(7,1,2)") != std::string::npos);
  const auto verdict = io::Json::parse(differ.out);
  CHECK(verdict["equivalent"] == false);
  CHECK(verdict["first_difference"]["code"] == 7);

  const Outcome same = run({"compare", rule("ignorant-k4-halfhalf"), rule("ignorant-k4-star")});
  CHECK(same.code == cli::kSuccess);
  CHECK(same.err.find("equivalent") != std::string::npos);
  const auto pair = io::Json::parse(same.out);
  CHECK(pair["left"] == pair["right"]);
}

TEST_CASE("compare output is the library verdict") {
  const Rule a = io::rule_from_json(io::read_json_file(rule("triangle-removal")));
  const Rule b = io::rule_from_json(io::read_json_file(rule("triangle-edge-removal")));
  const Outcome o = run({"compare", rule("triangle-removal"), rule("triangle-edge-removal")});
  CHECK(io::Json::parse(o.out) == io::verdict_to_json(compare(a, b)));
}

TEST_CASE("unique exit codes") {
  const Outcome tr = run({"unique", rule("triangle-removal")});
  CHECK(tr.code == cli::kSuccess);
  CHECK(io::Json::parse(tr.out)["reason"] == "symmetric-deterministic");

  const fs::path witness = scratch("witness.json");
  fs::remove(witness);
  const Outcome half = run({"unique", rule("ignorant-k4-halfhalf"), "--witness", witness.string()});
  CHECK(half.code == cli::kNegative);
  REQUIRE(fs::exists(witness));
  const Rule w = io::rule_from_json(io::read_json_file(witness.string()));
  const Rule input = io::rule_from_json(io::read_json_file(rule("ignorant-k4-halfhalf")));
  CHECK(!(w == input));
  CHECK(compare(w, input).equivalent);
}

TEST_CASE("golden outputs") {
  CHECK(run({"classes", "--k", "3"}).out == golden("classes_k3.json"));
  CHECK(run({"coeffs", rule("triangle-edge-removal")}).out == golden("coeffs_triangle_edge_removal.json"));
  CHECK(run({"unique", rule("triangle-edge-removal")}).out == golden("unique_triangle_edge_removal.json"));
  CHECK(run({"velocity", rule("triangle-removal"), kernel("two-part")}).out ==
        golden("velocity_triangle_removal_two_part.json"));
  CHECK(run({"integrate", rule("triangle-removal"), kernel("constant-0.8"), "--t-max", "0.2", "--dt", "0.05"}).out ==
        golden("integrate_triangle_removal.csv"));
  CHECK(run({"named", "complementing", "--k", "2"}).out == golden("named_complementing2.json"));
  CHECK(run({"compare", "--dilation", rule("triangle-removal"), rule("triangle-edge-removal")}).out ==
        golden("dilation_triangle_rules.json"));
  CHECK(run({"symmetrize", rule("identity3")}).out == golden("symmetrize_identity3.json"));
}

TEST_CASE("files written with --out match stdout") {
  const fs::path out = scratch("coeffs.json");
  const Outcome o = run({"coeffs", rule("triangle-edge-removal"), "--out", out.string()});
  CHECK(o.code == cli::kSuccess);
  CHECK(o.out.empty());
  CHECK(slurp(out) == golden("coeffs_triangle_edge_removal.json"));
}

TEST_CASE("named rules match the stored data files") {
  for (const auto& [args, file] : std::vector<std::pair<std::vector<std::string>, std::string>>{
           {{"named", "triangle-removal", "--k", "3"}, "triangle-removal"},
           {{"named", "triangle-edge-removal", "--k", "3"}, "triangle-edge-removal"},
           {{"named", "complementing", "--k", "3"}, "complementing3"},
           {{"named", "identity", "--k", "3"}, "identity3"},
           {{"named", "ignorant", "--k", "4", "--dist", "63=1/2", "--dist", "0=1/2"}, "ignorant-k4-halfhalf"},
           {{"named", "ignorant", "--k", "4", "--dist", "11=1"}, "ignorant-k4-star"}}) {
    CHECK(run(args).out == slurp(rule(file)));
  }
}

TEST_CASE("lift, dilation and the conjectural check") {
  const Outcome lifted = run({"lift", rule("triangle-removal"), "--to", "4"});
  CHECK(lifted.code == cli::kSuccess);
  const Rule up = io::rule_from_json(io::Json::parse(lifted.out));
  CHECK(up == lift(rules::triangle_removal(), 4));

  CHECK(run({"compare", "--dilation", rule("triangle-removal"), rule("complementing3")}).code == cli::kNegative);

  const Outcome k1 = run({"k1", rule("triangle-removal"), rule("triangle-edge-removal")});
  CHECK(k1.code == cli::kNegative);
  CHECK(k1.err.find("CONJECTURE") != std::string::npos);
  CHECK(io::Json::parse(k1.out)["status"] == "conjecture");
  CHECK(run({"k1", rule("triangle-removal"), rule("triangle-removal")}).code == cli::kSuccess);
}

TEST_CASE("validate reports offending rows") {
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << R"({"order": 3, "entries": [{"from": 7, "to": 0, "p": "1/2"}], "default": "identity"})";
  const Outcome o = run({"validate", bad.string()});
  CHECK(o.code == cli::kNegative);
  CHECK(io::Json::parse(o.out)["problems"][0] == "row 7: row sum 1/2");
  CHECK(run({"validate", rule("triangle-removal")}).code == cli::kSuccess);
  CHECK(run({"coeffs", bad.string()}).code == cli::kInputError);
}

TEST_CASE("simulate and transference") {
  const Outcome sim = run({"simulate", rule("triangle-removal"), "--n", "60", "--w0", kernel("two-part"), "--time",
                           "0.1", "--seed", "5", "--runs", "2", "--intervals", "2"});
  CHECK(sim.code == cli::kSuccess);
  CHECK(sim.out.rfind("run,t,block_i,block_j,density,reference,abs_dev\n", 0) == 0);
  // Two runs, three times, three blocks.
  CHECK(std::count(sim.out.begin(), sim.out.end(), '\n') == 1 + 2 * 3 * 3);
  CHECK(run({"simulate", rule("triangle-removal"), "--n", "60", "--w0", kernel("two-part"), "--time", "0.1", "--seed",
             "5", "--runs", "2", "--intervals", "2"})
            .out == sim.out);

  const Outcome ok = run({"transference", rule("identity3"), "--n", "50", "--w0", kernel("two-part"), "--time", "0.2"});
  CHECK(ok.code == cli::kSuccess);
  CHECK(io::Json::parse(ok.out)["passed"] == true);
  const Outcome tight = run({"transference", rule("triangle-removal"), "--n", "50", "--w0", kernel("constant-0.8"),
                             "--time", "0.2", "--eps", "0"});
  CHECK(tight.code == cli::kNegative);
}

TEST_CASE("error exit codes") {
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"no-such-command"}).code == cli::kInputError);
  CHECK(run({"coeffs", "/nonexistent/rule.json"}).code == cli::kInputError);
  CHECK(run({"coeffs", rule("triangle-removal"), "--bogus"}).code == cli::kInputError);
  CHECK(run({"lift", rule("triangle-removal"), "--to", "2"}).code == cli::kInputError);
  CHECK(run({"classes", "--k", "7"}).code == cli::kResourceCap);
  CHECK(run({"--cap", "3", "coeffs", rule("ignorant-k4-star")}).code == cli::kResourceCap);
  CHECK(run({"simulate", rule("triangle-removal"), "--n", "6000", "--w0", kernel("constant-0.8"), "--time", "0.1"})
            .code == cli::kResourceCap);
  CHECK(run({"integrate", rule("complementing3"), kernel("constant-0"), "--t-max", "2", "--dt", "0.5"}).code ==
        cli::kInternal);
  CHECK(run({"named", "triangle-removal", "--k", "4"}).code == cli::kInputError);
}

TEST_CASE("environment cap is honoured and --cap overrides it") {
  ::setenv("FLIPPROC_CAP", "3", 1);
  CHECK(run({"coeffs", rule("ignorant-k4-star")}).code == cli::kResourceCap);
  CHECK(run({"--cap", "4", "coeffs", rule("ignorant-k4-star")}).code == cli::kSuccess);
  ::unsetenv("FLIPPROC_CAP");
  CHECK(run({"coeffs", rule("ignorant-k4-star")}).code == cli::kSuccess);
}
