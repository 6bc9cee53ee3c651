#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace frechet {

using BigInt = boost::multiprecision::mpz_int;

enum class Ordering : int { Less = -1, Equal = 0, Greater = 1 };

inline Ordering reverse(Ordering o) { return static_cast<Ordering>(-static_cast<int>(o)); }
inline Ordering ordering_from_sign(int s) {
  return s < 0 ? Ordering::Less : (s > 0 ? Ordering::Greater : Ordering::Equal);
}
const char* to_string(Ordering o);

class InvalidRadicand : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number num/den with den > 0, kept in lowest terms.
class IntFraction {
 public:
  IntFraction() : num_(0), den_(1) {}
  IntFraction(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit on purpose
  IntFraction(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT
  IntFraction(BigInt n, BigInt d);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  int sign() const { return num_.sign(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == 1; }

  double to_double() const;

  IntFraction operator-() const;
  friend IntFraction operator+(const IntFraction& a, const IntFraction& b);
  friend IntFraction operator-(const IntFraction& a, const IntFraction& b);
  friend IntFraction operator*(const IntFraction& a, const IntFraction& b);
  friend IntFraction operator/(const IntFraction& a, const IntFraction& b);
  IntFraction& operator+=(const IntFraction& o) { return *this = *this + o; }
  IntFraction& operator-=(const IntFraction& o) { return *this = *this - o; }
  IntFraction& operator*=(const IntFraction& o) { return *this = *this * o; }

  friend bool operator==(const IntFraction& a, const IntFraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const IntFraction& a, const IntFraction& b);

  std::string str() const;

 private:
  void normalize();
  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const IntFraction& f);

Ordering compare(const IntFraction& a, const IntFraction& b);

/// rational + sign * sqrt(radicand). The universal comparison currency.
struct ExactRoot {
  IntFraction rational;
  IntFraction radicand;  // >= 0
  int sign = 1;          // +1 or -1

  ExactRoot() = default;
  ExactRoot(IntFraction r) : rational(std::move(r)) {}  // NOLINT
  ExactRoot(IntFraction r, IntFraction rad, int s);

  static ExactRoot sqrt_of(IntFraction rad) { return ExactRoot(IntFraction(0), std::move(rad), 1); }

  bool is_rational() const { return radicand.is_zero(); }
  double to_double() const;
  std::string str() const;

  friend bool operator==(const ExactRoot& a, const ExactRoot& b);
};

std::ostream& operator<<(std::ostream& os, const ExactRoot& r);

struct RationalUpperBound {
  IntFraction value;
};

/// Exact ordering of lhs against sign*sqrt(root). Throws InvalidRadicand if root < 0.
Ordering compare_fraction_to_root(const IntFraction& lhs, const IntFraction& root, int sign);

/// Sign of p + s*sqrt(q) for rational p, q >= 0 and s in {-1, 0, 1}.
int sign_of_root_sum(const IntFraction& p, int s, const IntFraction& q);

/// Exact ordering of two a/b +- sqrt(c/d) expressions.
Ordering compare_root_expressions(const ExactRoot& x, const ExactRoot& y);

inline bool operator<(const ExactRoot& a, const ExactRoot& b) {
  return compare_root_expressions(a, b) == Ordering::Less;
}

/// Rational over-estimate of x with gap at most 2^-slack_bits * max(1, |x|).
RationalUpperBound rational_upper_bound(const ExactRoot& x, unsigned slack_bits);

/// Rational under-estimate with the same gap guarantee.
IntFraction rational_lower_bound(const ExactRoot& x, unsigned slack_bits);

/// floor(sqrt(v)) for v >= 0.
BigInt isqrt_floor(const BigInt& v);
BigInt isqrt_ceil(const BigInt& v);

}  // namespace frechet
