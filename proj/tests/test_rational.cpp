#include <doctest.h>

#include <random>

#include "dl/rational.hpp"

using namespace dl;

TEST_CASE("bigint arithmetic agrees with int64 on small values") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t a = d(rng), b = d(rng);
    CHECK((BigInt(a) + BigInt(b)).to_string() == std::to_string(a + b));
    CHECK((BigInt(a) - BigInt(b)).to_string() == std::to_string(a - b));
    CHECK((BigInt(a) * BigInt(b)).to_string() == std::to_string(a * b));
    if (b != 0) {
      BigInt q, r;
      BigInt::divmod(BigInt(a), BigInt(b), q, r);
      CHECK(q.to_string() == std::to_string(a / b));
      CHECK(r.to_string() == std::to_string(a % b));
    }
    CHECK((BigInt(a).compare(BigInt(b)) < 0) == (a < b));
  }
}

TEST_CASE("bigint handles multi-limb products") {
  BigInt big = BigInt::from_decimal("123456789012345678901234567890");
  CHECK(big.to_string() == "123456789012345678901234567890");
  CHECK((big * big).to_string() ==
        "15241578753238836750495351562536198787501905199875019052100");
  CHECK((big - big).is_zero());
  BigInt q, r;
  BigInt::divmod(big * big, big, q, r);
  CHECK(q == big);
  CHECK(r.is_zero());
}

TEST_CASE("rational normalization and parsing") {
  CHECK(Rational::parse("0.5") == Rational(BigInt(1), BigInt(2)));
  CHECK(Rational::parse("1/2") == Rational(BigInt(2), BigInt(4)));
  CHECK(Rational::parse("-7/4").to_string() == "-7/4");
  CHECK(Rational::parse("3").to_string() == "3");
  CHECK((Rational::parse("1/3") + Rational::parse("1/6")).to_string() == "1/2");
  CHECK((Rational::parse("2/3") * Rational::parse("3/2")) == Rational(1));
  CHECK((Rational(1) / Rational::parse("1/7")).to_string() == "7");
  CHECK(Rational::parse("1/3") < Rational::parse("1/2"));
  CHECK(Rational::parse("-2") < Rational::parse("1/9"));
}

TEST_CASE("rational field laws on random values") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-40, 40), e(1, 12);
  auto r = [&] { return Rational(BigInt(d(rng)), BigInt(e(rng))); };
  for (int i = 0; i < 500; ++i) {
    Rational a = r(), b = r(), c = r();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
}

TEST_CASE("from_double is exact") {
  CHECK(Rational::from_double(0.5).to_string() == "1/2");
  CHECK(Rational::from_double(3.0).to_string() == "3");
  CHECK(Rational::from_double(0.1) != Rational::parse("1/10"));  // binary 0.1 is not 1/10
  CHECK(Rational::from_double(Rational::parse("-13/8").to_double()).to_string() == "-13/8");
}
