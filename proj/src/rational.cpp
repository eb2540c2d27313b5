#include "sflow/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace sflow {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  bool neg = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  Rational r(n, d);
  r.canonicalize();
  if (neg) r = -r;
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

const Rational& Capacity::value() const {
  if (inf_) throw std::logic_error("value() on infinite capacity");
  return value_;
}

Capacity Capacity::operator-(const Rational& x) const {
  if (inf_) return *this;
  return Capacity(Rational(value_ - x));
}

Capacity Capacity::operator+(const Capacity& o) const {
  if (inf_ || o.inf_) return infinite();
  return Capacity(Rational(value_ + o.value_));
}

Capacity Capacity::operator*(const Rational& k) const {
  if (inf_) {
    if (k <= 0) throw std::logic_error("infinite capacity scaled by non-positive factor");
    return *this;
  }
  return Capacity(Rational(value_ * k));
}

bool operator==(const Capacity& a, const Capacity& b) {
  if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Capacity& a, const Capacity& b) {
  if (a.inf_ && b.inf_) return std::strong_ordering::equal;
  if (a.inf_) return std::strong_ordering::greater;
  if (b.inf_) return std::strong_ordering::less;
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator<(const Rational& a, const Capacity& b) { return b.is_infinite() || a < b.value(); }
bool operator<=(const Rational& a, const Capacity& b) { return b.is_infinite() || a <= b.value(); }
bool operator>(const Rational& a, const Capacity& b) { return b.is_finite() && a > b.value(); }

Capacity min(const Capacity& a, const Capacity& b) { return b < a ? b : a; }

std::optional<Capacity> parse_capacity(std::string_view text) {
  if (text == "inf") return Capacity::infinite();
  auto r = parse_rational(text);
  if (!r) return std::nullopt;
  return Capacity(*r);
}

std::string to_string(const Capacity& c) { return c.is_infinite() ? "inf" : to_string(c.value()); }

}  // namespace sflow
