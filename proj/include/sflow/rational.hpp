#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace sflow {

// Always canonical: gmp keeps mpq_class reduced after every arithmetic op,
// and the constructors below canonicalize explicitly.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

// Accepts "p", "-p" and "p/q" with q != 0. Returns nullopt on anything else.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Rational or +infinity. Finite values are expected to be >= 0 for capacities,
// but the type itself also carries signed residual amounts.
class Capacity {
 public:
  Capacity() = default;
  Capacity(const Rational& v) : value_(v) {}  // NOLINT(implicit)
  Capacity(long v) : value_(v) {}             // NOLINT(implicit)

  static Capacity infinite() {
    Capacity c;
    c.inf_ = true;
    return c;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  // Precondition: finite.
  const Rational& value() const;

  // inf - finite = inf. finite - inf is a logic error.
  Capacity operator-(const Rational& x) const;
  Capacity operator+(const Capacity& o) const;
  Capacity operator*(const Rational& k) const;

  friend bool operator==(const Capacity& a, const Capacity& b);
  friend std::strong_ordering operator<=>(const Capacity& a, const Capacity& b);

 private:
  Rational value_{0};
  bool inf_ = false;
};

bool operator<(const Rational& a, const Capacity& b);
bool operator<=(const Rational& a, const Capacity& b);
bool operator>(const Rational& a, const Capacity& b);

Capacity min(const Capacity& a, const Capacity& b);

std::optional<Capacity> parse_capacity(std::string_view text);
std::string to_string(const Capacity& c);

}  // namespace sflow
