#include "heisring/cyclo.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace heisring;

TEST_CASE("root exponents reduce to canonical form") {
  CHECK(RootOfUnity(2, 4) == RootOfUnity(1, 2));
  CHECK(RootOfUnity(0, 5) == RootOfUnity());
  CHECK(RootOfUnity(7, 3) == RootOfUnity(1, 3));
  CHECK(RootOfUnity().order() == 1);
  CHECK(RootOfUnity(3, 12).order() == 4);
}

TEST_CASE("root arithmetic is exponent arithmetic in Q/Z") {
  CHECK(RootOfUnity(1, 2) * RootOfUnity(1, 3) == RootOfUnity(5, 6));
  CHECK(RootOfUnity(1, 4).pow(2) == RootOfUnity(1, 2));
  CHECK(RootOfUnity(1, 4).pow(-1) == RootOfUnity(3, 4));
  CHECK(RootOfUnity(3, 8).inverse() * RootOfUnity(3, 8) == RootOfUnity());
  for (long m = 1; m <= 20; ++m)
    for (const auto& z : roots_of_order(m)) CHECK(z.pow(z.order()) == RootOfUnity());
}

TEST_CASE("order of a product divides the lcm of orders") {
  for (long m = 1; m <= 12; ++m)
    for (long k = 1; k <= 12; ++k)
      for (const auto& z : roots_of_order(m))
        for (const auto& w : roots_of_order(k)) CHECK(std::lcm(m, k) % (z * w).order() == 0);
}

TEST_CASE("root serialization round-trips and rejects junk") {
  CHECK(RootOfUnity().str() == "0/1");
  CHECK(RootOfUnity(3, 12).str() == "1/4");
  CHECK(RootOfUnity::parse("5/6") == RootOfUnity(5, 6));
  CHECK_THROWS_AS(RootOfUnity::parse("5"), std::invalid_argument);
  CHECK_THROWS_AS(RootOfUnity::parse("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(RootOfUnity::parse("-1/4"), std::invalid_argument);
}

namespace {
poly::ZPoly make(std::initializer_list<long> cs) {
  poly::ZPoly p;
  for (long c : cs) p.emplace_back(c);
  return p;
}
}  // namespace

TEST_CASE("cyclotomic polynomials at small levels") {
  CHECK(cyclotomic_poly(1) == make({-1, 1}));
  CHECK(cyclotomic_poly(2) == make({1, 1}));
  CHECK(cyclotomic_poly(4) == make({1, 0, 1}));
  CHECK(cyclotomic_poly(6) == make({1, -1, 1}));
  CHECK(cyclotomic_poly(12) == make({1, 0, -1, 0, 1}));
  CHECK_THROWS_AS(cyclotomic_poly(0), std::invalid_argument);
}

TEST_CASE("product of Phi_d over divisors of N recovers x^N - 1") {
  for (long n = 1; n <= 48; ++n) {
    poly::ZPoly prod{mpz_class(1)};
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) prod = poly::mul(prod, cyclotomic_poly(d));
    poly::ZPoly xn1(n + 1, mpz_class(0));
    xn1[0] = -1;
    xn1[n] = 1;
    CHECK(poly::degree(prod) == n);
    // divides exactly, and the quotient of equals is 1
    CHECK(poly::div_exact(xn1, prod) == poly::ZPoly{mpz_class(1)});
    CHECK(int(cyclotomic_poly(n).size()) - 1 == euler_phi(n));
  }
}

TEST_CASE("cyclotomic identities forced by the modulus") {
  // zeta_3 + zeta_3^2 = -1
  CycloNumber z3 = CycloNumber::zeta(3);
  CHECK(z3 + z3 * z3 == CycloNumber::from_rational(-1, 3));
  // zeta_2 + 1 = 0
  CHECK(CycloNumber::zeta(2) + CycloNumber::one(2) == CycloNumber(2));
  // conj(zeta_8) = zeta_8^7
  CHECK(CycloNumber::zeta(8).conj() == CycloNumber::zeta(8).pow(7));
  // a primitive root has multiplicative order exactly N
  CHECK(CycloNumber::zeta(12).pow(12) == CycloNumber::one(12));
  CHECK(!(CycloNumber::zeta(12).pow(6) == CycloNumber::one(12)));
}

TEST_CASE("embedding preserves sums, products and equality") {
  std::mt19937 rng(7);
  auto rational = [](long n, long d) {
    mpq_class q(n, d);
    q.canonicalize();
    return q;
  };
  auto random_elt = [&](long level) {
    CycloNumber acc(level);
    for (int i = 0; i < 4; ++i)
      acc += CycloNumber::zeta(level).pow(long(rng() % level)) *
             rational(long(rng() % 7) - 3, 1 + long(rng() % 3));
    return acc;
  };
  for (long level : {2L, 3L, 4L, 6L, 8L}) {
    for (long mult : {2L, 3L}) {
      long big = level * mult;
      for (int trial = 0; trial < 8; ++trial) {
        CycloNumber a = random_elt(level), b = random_elt(level);
        CHECK(a.embed(big) + b.embed(big) == (a + b).embed(big));
        CHECK(a.embed(big) * b.embed(big) == (a * b).embed(big));
        CHECK((a == b) == (a.embed(big) == b.embed(big)));
      }
    }
  }
  CHECK_THROWS_AS(CycloNumber::zeta(4).embed(6), std::invalid_argument);
}

TEST_CASE("ring axioms on random residues at levels up to 24") {
  std::mt19937 rng(2024);
  for (long level : {5L, 7L, 9L, 16L, 24L}) {
    auto rand_elt = [&]() {
      CycloNumber acc(level);
      for (int i = 0; i < 3; ++i) {
        mpq_class q(long(rng() % 9) - 4, 1 + long(rng() % 4));
        q.canonicalize();
        acc += CycloNumber::zeta(level).pow(long(rng() % level)) * q;
      }
      return acc;
    };
    for (int trial = 0; trial < 10; ++trial) {
      CycloNumber a = rand_elt(), b = rand_elt(), c = rand_elt();
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
    }
  }
}

TEST_CASE("conjugation is a ring involution fixing rationals") {
  CycloNumber x = CycloNumber::zeta(5) + CycloNumber::from_rational(mpq_class(2, 3), 5);
  CycloNumber y = CycloNumber::zeta(5).pow(3) * mpq_class(4);
  CHECK(x.conj().conj() == x);
  CHECK((x * y).conj() == x.conj() * y.conj());
  CHECK(CycloNumber::from_rational(mpq_class(9, 7), 5).conj() ==
        CycloNumber::from_rational(mpq_class(9, 7), 5));
  // z * conj(z) is rational and positive for a root of unity
  mpq_class v;
  CHECK((CycloNumber::zeta(8) * CycloNumber::zeta(8).conj()).is_rational(&v));
  CHECK(v == 1);
}

TEST_CASE("from_root respects root multiplication") {
  for (long m : {2L, 3L, 4L, 6L}) {
    for (const auto& z : roots_dividing(m))
      for (const auto& w : roots_dividing(m)) {
        long level = 12;
        CHECK(CycloNumber::from_root(z, level) * CycloNumber::from_root(w, level) ==
              CycloNumber::from_root(z * w, level));
      }
  }
  CHECK_THROWS_AS(CycloNumber::from_root(RootOfUnity(1, 5), 12), std::invalid_argument);
}
