#ifndef DL_RATIONAL_HPP
#define DL_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dl {

// Arbitrary-precision signed integer, little-endian base-2^32 magnitude.
// Arithmetic here backs the exact term/formula evaluator; the coincidence
// and substitution lemma suites assert exact equality, so no fixed-width
// shortcuts.
class BigInt {
public:
  BigInt() = default;
  BigInt(std::int64_t v);

  static BigInt from_decimal(const std::string& digits);

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator-() const;

  // Truncated toward zero. o must be nonzero.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

  int compare(const BigInt& o) const;
  bool operator==(const BigInt& o) const { return compare(o) == 0; }
  bool operator!=(const BigInt& o) const { return compare(o) != 0; }
  bool operator<(const BigInt& o) const { return compare(o) < 0; }
  bool operator<=(const BigInt& o) const { return compare(o) <= 0; }

  bool is_zero() const { return mag_.empty(); }
  bool negative() const { return neg_; }
  BigInt abs() const;

  static BigInt gcd(BigInt a, BigInt b);

  std::string to_string() const;
  double to_double() const;

private:
  bool neg_ = false;
  std::vector<std::uint32_t> mag_;  // little-endian, no trailing zero limbs

  void trim();
  static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
};

// Exact rational, always normalized: gcd(num, den) = 1, den > 0.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t v) : num_(v), den_(1) {}
  Rational(BigInt num, BigInt den);

  // Accepts "3", "-3", "0.5", "1/2", "-7/4".
  static Rational parse(const std::string& text);
  // Exact value of a finite double (every finite double is a rational).
  static Rational from_double(double v);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // o nonzero
  Rational operator-() const;

  int compare(const Rational& o) const;
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return compare(o) < 0; }
  bool operator<=(const Rational& o) const { return compare(o) <= 0; }
  bool operator>(const Rational& o) const { return compare(o) > 0; }
  bool operator>=(const Rational& o) const { return compare(o) >= 0; }

  bool is_zero() const { return num_.is_zero(); }
  bool negative() const { return num_.negative(); }
  bool is_integer() const;

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  Rational abs() const { return negative() ? -*this : *this; }

  std::string to_string() const;  // "n" or "n/d"
  double to_double() const;

private:
  BigInt num_, den_;
  void normalize();
};

}  // namespace dl

#endif
