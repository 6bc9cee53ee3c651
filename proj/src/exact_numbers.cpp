#include "frechet/exact_numbers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace frechet {

namespace mp = boost::multiprecision;

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
  }
  return "?";
}

IntFraction::IntFraction(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("IntFraction: zero denominator");
  normalize();
}

void IntFraction::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (den_ == 1) return;
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  BigInt g = mp::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

namespace {

double big_ratio_to_double(const BigInt& num, const BigInt& den) {
  if (num.is_zero()) return 0.0;
  const auto nb = static_cast<long>(mp::msb(mp::abs(num)));
  const auto db = static_cast<long>(mp::msb(den));
  if (nb < 1000 && db < 1000) return num.convert_to<double>() / den.convert_to<double>();
  // Shift both into double range, keeping ~120 significant bits of each.
  const long shift_n = std::max(0L, nb - 120);
  const long shift_d = std::max(0L, db - 120);
  const double n = BigInt(num >> shift_n).convert_to<double>();
  const double d = BigInt(den >> shift_d).convert_to<double>();
  return std::ldexp(n / d, static_cast<int>(shift_n - shift_d));
}

}  // namespace

double IntFraction::to_double() const { return big_ratio_to_double(num_, den_); }

IntFraction IntFraction::operator-() const {
  IntFraction r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

IntFraction operator+(const IntFraction& a, const IntFraction& b) {
  if (a.den_ == 1 && b.den_ == 1) return IntFraction(BigInt(a.num_ + b.num_));
  if (a.den_ == b.den_) return IntFraction(a.num_ + b.num_, a.den_);
  return IntFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

IntFraction operator-(const IntFraction& a, const IntFraction& b) {
  if (a.den_ == 1 && b.den_ == 1) return IntFraction(BigInt(a.num_ - b.num_));
  if (a.den_ == b.den_) return IntFraction(a.num_ - b.num_, a.den_);
  return IntFraction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

IntFraction operator*(const IntFraction& a, const IntFraction& b) {
  if (a.den_ == 1 && b.den_ == 1) return IntFraction(BigInt(a.num_ * b.num_));
  return IntFraction(a.num_ * b.num_, a.den_ * b.den_);
}

IntFraction operator/(const IntFraction& a, const IntFraction& b) {
  if (b.is_zero()) throw std::domain_error("IntFraction: division by zero");
  return IntFraction(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const IntFraction& a, const IntFraction& b) {
  if (a.den_ == b.den_) return a.num_.compare(b.num_) <=> 0;
  const int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa <=> sb;
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  return lhs.compare(rhs) <=> 0;
}

Ordering compare(const IntFraction& a, const IntFraction& b) {
  const auto c = a <=> b;
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

std::string IntFraction::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntFraction& f) {
  os << f.num();
  if (f.den() != 1) os << '/' << f.den();
  return os;
}

ExactRoot::ExactRoot(IntFraction r, IntFraction rad, int s)
    : rational(std::move(r)), radicand(std::move(rad)), sign(s >= 0 ? 1 : -1) {
  if (radicand.sign() < 0) throw InvalidRadicand("ExactRoot: negative radicand " + radicand.str());
}

double ExactRoot::to_double() const {
  return rational.to_double() + sign * std::sqrt(radicand.to_double());
}

std::string ExactRoot::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

bool operator==(const ExactRoot& a, const ExactRoot& b) {
  return compare_root_expressions(a, b) == Ordering::Equal;
}

std::ostream& operator<<(std::ostream& os, const ExactRoot& r) {
  os << r.rational;
  if (!r.radicand.is_zero()) os << (r.sign > 0 ? " + " : " - ") << "sqrt(" << r.radicand << ')';
  return os;
}

int sign_of_root_sum(const IntFraction& p, int s, const IntFraction& q) {
  if (q.sign() < 0) throw InvalidRadicand("negative radicand " + q.str());
  const int sp = p.sign();
  if (s == 0 || q.is_zero()) return sp;
  if (sp == 0 || sp == s) return s;
  // Opposite signs: the larger magnitude wins; squares are rational.
  const auto c = (p * p) <=> q;
  if (c > 0) return sp;
  if (c < 0) return s;
  return 0;
}

Ordering compare_fraction_to_root(const IntFraction& lhs, const IntFraction& root, int sign) {
  if (root.sign() < 0) throw InvalidRadicand("compare_fraction_to_root: negative radicand " + root.str());
  return ordering_from_sign(sign_of_root_sum(lhs, -sign, root));
}

namespace {

// Sign of q + a*sqrt(A) + b*sqrt(B).
int sign_two_roots(const IntFraction& q, int a, const IntFraction& A, int b, const IntFraction& B) {
  if (a == 0 || A.is_zero()) return sign_of_root_sum(q, b, B);
  if (b == 0 || B.is_zero()) return sign_of_root_sum(q, a, A);
  const int sl = sign_of_root_sum(q, a, A);  // sign of L = q + a*sqrt(A)
  const int sr = b;                          // sign of b*sqrt(B)
  if (sl == 0) return sr;
  if (sl == sr) return sl;
  // |L| against sqrt(B): L^2 - B = (q^2 + A - B) + 2 q a sqrt(A).
  const IntFraction p = q * q + A - B;
  const int s = q.sign() * a;
  const IntFraction Q = IntFraction(4) * q * q * A;
  const int m = sign_of_root_sum(p, s, Q);
  if (m > 0) return sl;
  if (m < 0) return -sl;
  return 0;
}

}  // namespace

Ordering compare_root_expressions(const ExactRoot& x, const ExactRoot& y) {
  if (x.radicand.sign() < 0 || y.radicand.sign() < 0)
    throw InvalidRadicand("compare_root_expressions: negative radicand");
  if (x.radicand == y.radicand && x.sign == y.sign) return compare(x.rational, y.rational);
  return ordering_from_sign(
      sign_two_roots(x.rational - y.rational, x.sign, x.radicand, -y.sign, y.radicand));
}

BigInt isqrt_floor(const BigInt& v) {
  if (v.sign() < 0) throw InvalidRadicand("isqrt of negative value");
  return mp::sqrt(v);
}

BigInt isqrt_ceil(const BigInt& v) {
  BigInt r = isqrt_floor(v);
  if (r * r < v) ++r;
  return r;
}

namespace {

// floor/ceil bounds on sqrt(rad) with denominator 2^bits.
std::pair<IntFraction, IntFraction> sqrt_bracket(const IntFraction& rad, unsigned bits) {
  const BigInt scaled_num = rad.num() << (2 * bits);
  const BigInt lo_in = scaled_num / rad.den();
  const BigInt hi_in = (scaled_num + rad.den() - 1) / rad.den();
  const BigInt scale = BigInt(1) << bits;
  return {IntFraction(isqrt_floor(lo_in), scale), IntFraction(isqrt_ceil(hi_in), scale)};
}

}  // namespace

RationalUpperBound rational_upper_bound(const ExactRoot& x, unsigned slack_bits) {
  if (x.is_rational()) return {x.rational};
  // Each bracket end is within 2^-(bits) of sqrt, bits = slack_bits + 1.
  const auto [lo, hi] = sqrt_bracket(x.radicand, slack_bits + 1);
  return {x.sign > 0 ? x.rational + hi : x.rational - lo};
}

IntFraction rational_lower_bound(const ExactRoot& x, unsigned slack_bits) {
  if (x.is_rational()) return x.rational;
  const auto [lo, hi] = sqrt_bracket(x.radicand, slack_bits + 1);
  return x.sign > 0 ? x.rational + lo : x.rational - hi;
}

}  // namespace frechet
