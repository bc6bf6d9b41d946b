#include "dl/rational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dl {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(std::int64_t v) {
  neg_ = v < 0;
  std::uint64_t m = neg_ ? (~static_cast<std::uint64_t>(v) + 1) : static_cast<std::uint64_t>(v);
  while (m != 0) {
    mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffu));
    m >>= 32;
  }
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) neg_ = false;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  std::uint64_t carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    std::uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<std::uint32_t>(s & 0xffffffffu));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<std::uint32_t>(carry));
  return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r = a;
  std::int64_t borrow = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    std::int64_t d = static_cast<std::int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += static_cast<std::int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<std::uint32_t>(d);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (neg_ == o.neg_) {
    r.neg_ = neg_;
    r.mag_ = add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.neg_ = neg_;
      r.mag_ = sub_mag(mag_, o.mag_);
    } else {
      r.neg_ = o.neg_;
      r.mag_ = sub_mag(o.mag_, mag_);
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt r;
  r.neg_ = neg_ != o.neg_;
  r.mag_.assign(mag_.size() + o.mag_.size(), 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    std::uint64_t carry = 0;
    for (size_t j = 0; j < o.mag_.size(); ++j) {
      std::uint64_t cur = r.mag_[i + j] +
                          static_cast<std::uint64_t>(mag_[i]) * o.mag_[j] + carry;
      r.mag_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    size_t k = i + o.mag_.size();
    while (carry) {
      std::uint64_t cur = r.mag_[k] + carry;
      r.mag_[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
  // Schoolbook bit-shift division on magnitudes; fine for the term sizes here.
  BigInt am = a.abs(), bm = b.abs();
  if (cmp_mag(am.mag_, bm.mag_) < 0) {
    q = BigInt();
    r = a;
    return;
  }
  size_t abits = am.mag_.size() * 32;
  BigInt quo, rem;
  for (size_t i = abits; i-- > 0;) {
    // rem = rem*2 + bit i of am
    std::uint32_t carry = 0;
    for (auto& limb : rem.mag_) {
      std::uint32_t nc = limb >> 31;
      limb = (limb << 1) | carry;
      carry = nc;
    }
    if (carry) rem.mag_.push_back(1);
    std::uint32_t bit = (am.mag_[i / 32] >> (i % 32)) & 1u;
    if (bit) {
      if (rem.mag_.empty())
        rem.mag_.push_back(1);
      else {
        std::uint64_t s = static_cast<std::uint64_t>(rem.mag_[0]) + 1;
        rem.mag_[0] = static_cast<std::uint32_t>(s & 0xffffffffu);
        std::uint64_t c = s >> 32;
        size_t k = 1;
        while (c) {
          if (k == rem.mag_.size()) {
            rem.mag_.push_back(static_cast<std::uint32_t>(c));
            break;
          }
          std::uint64_t cur = rem.mag_[k] + c;
          rem.mag_[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
          c = cur >> 32;
          ++k;
        }
      }
    }
    if (cmp_mag(rem.mag_, bm.mag_) >= 0) {
      rem.mag_ = sub_mag(rem.mag_, bm.mag_);
      size_t limb = i / 32;
      if (quo.mag_.size() <= limb) quo.mag_.resize(limb + 1, 0);
      quo.mag_[limb] |= (1u << (i % 32));
    }
  }
  quo.trim();
  rem.trim();
  quo.neg_ = !quo.is_zero() && (a.neg_ != b.neg_);
  rem.neg_ = !rem.is_zero() && a.neg_;
  q = quo;
  r = rem;
}

int BigInt::compare(const BigInt& o) const {
  if (neg_ != o.neg_) return neg_ ? -1 : 1;
  int c = cmp_mag(mag_, o.mag_);
  return neg_ ? -c : c;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  r.neg_ = false;
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

BigInt BigInt::from_decimal(const std::string& digits) {
  BigInt r;
  BigInt ten(10);
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
    r = r * ten + BigInt(c - '0');
  }
  return r;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt v = abs();
  BigInt ten(10);
  std::string s;
  while (!v.is_zero()) {
    BigInt q, r;
    divmod(v, ten, q, r);
    char d = r.mag_.empty() ? '0' : static_cast<char>('0' + r.mag_[0]);
    s.push_back(d);
    v = q;
  }
  if (neg_) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

double BigInt::to_double() const {
  double v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = v * 4294967296.0 + mag_[i];
  return neg_ ? -v : v;
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    BigInt q, r;
    BigInt::divmod(num_, g, q, r);
    num_ = q;
    BigInt::divmod(den_, g, q, r);
    den_ = q;
  }
}

Rational Rational::parse(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw std::invalid_argument("Rational: empty literal");
  auto slash = s.find('/');
  Rational r;
  if (slash != std::string::npos) {
    r = Rational(BigInt::from_decimal(s.substr(0, slash)),
                 BigInt::from_decimal(s.substr(slash + 1)));
  } else {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      r = Rational(BigInt::from_decimal(s), BigInt(1));
    } else {
      std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (ip.empty() || fp.empty()) throw std::invalid_argument("Rational: bad decimal");
      BigInt den(1);
      for (size_t i = 0; i < fp.size(); ++i) den = den * BigInt(10);
      r = Rational(BigInt::from_decimal(ip) * den + BigInt::from_decimal(fp), den);
    }
  }
  return neg ? -r : r;
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
  if (v == 0) return Rational(0);
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, 0.5 <= |m| < 1
  // 53 bits of mantissa
  std::int64_t mi = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  BigInt num(mi), den(1);
  BigInt two(2);
  for (; exp > 0; --exp) num = num * two;
  for (; exp < 0; ++exp) den = den * two;
  return Rational(num, den);
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(num_ * o.den_, den_ * o.num_);
}
Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

int Rational::compare(const Rational& o) const {
  return (num_ * o.den_).compare(o.num_ * den_);
}

bool Rational::is_integer() const { return den_ == BigInt(1); }

std::string Rational::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

}  // namespace dl
