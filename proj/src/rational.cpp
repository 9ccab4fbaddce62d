#include "flipproc/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "flipproc/error.hpp"

namespace flipproc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// Parses [+-]digits[.digits][(e|E)[+-]digits] exactly.
mpq_class parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw InputError("malformed exponent in number '" + std::string(text) + "'");
    }
    exponent = std::strtol(std::string(exp_part).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    throw InputError("malformed number '" + std::string(text) + "'");
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw InputError("malformed number '" + std::string(text) + "'");
  }
  digits.append(int_part);
  digits.append(frac_part);
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  mpq_class value;
  if (exponent >= 0) {
    value = mpq_class(mantissa * pow10(static_cast<unsigned long>(exponent)));
  } else {
    value = mpq_class(mantissa, pow10(static_cast<unsigned long>(-exponent)));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw InputError("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  Rational r;
  if (text.empty()) throw InputError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
      num_digits.remove_prefix(1);
    }
    if (!all_digits(num_digits) || !all_digits(den)) {
      throw InputError("malformed fraction '" + std::string(text) + "'");
    }
    mpz_class n(std::string(num_digits), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    if (!num.empty() && num.front() == '-') n = -n;
    r.value_ = mpq_class(n, d);
    r.value_.canonicalize();
    return r;
  }
  r.value_ = parse_decimal(text);
  return r;
}

std::string Rational::to_string() const { return value_.get_str(10); }

bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational Rational::abs() const {
  Rational r;
  r.value_ = ::abs(value_);
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

}  // namespace flipproc
