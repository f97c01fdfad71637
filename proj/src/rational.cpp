#include "hyprec/rational.hpp"

#include <cctype>
#include <cmath>

#include "hyprec/error.hpp"

namespace hyprec {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidArgumentError("malformed rational literal: " + std::string(whole));
  mpz_class v(std::string(s), 10);
  return negative ? mpz_class(-v) : v;
}

}  // namespace

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgumentError("cannot convert non-finite value to a rational");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InvalidArgumentError("zero denominator in rational literal: " + std::string(text));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if (int_part.empty()) int_part = "0";
    if (frac_part.empty() || !all_digits(frac_part) || !all_digits(int_part)) {
      throw InvalidArgumentError("malformed rational literal: " + std::string(text));
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    mpz_class num = mpz_class(std::string(int_part), 10) * scale + mpz_class(std::string(frac_part), 10);
    Rational q(negative ? mpz_class(-num) : num, scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) { return q.get_str(10); }

}  // namespace hyprec
