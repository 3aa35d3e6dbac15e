#include "heisring/heis_irr.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace heisring;

namespace {

const RootOfUnity one;
const RootOfUnity minus_one(1, 2);

RepSum V(const RootOfUnity& zeta, const mpz_class& mult = 1) {
  RepSum s;
  s.add(IrrTriple(one, one, zeta), mult);
  return s;
}

std::vector<RootOfUnity> roots_with_orders(std::initializer_list<long> orders) {
  std::vector<RootOfUnity> out;
  for (long m : orders)
    for (const auto& z : roots_of_order(m)) out.push_back(z);
  return out;
}

}  // namespace

TEST_CASE("triples are equal exactly when their keys agree") {
  IrrTriple t1(RootOfUnity(1, 4), one, minus_one);
  IrrTriple t2(RootOfUnity(3, 4), one, minus_one);
  CHECK(t1 == t2);
  CHECK(t1.key() == std::array<RootOfUnity, 3>{minus_one, one, minus_one});
  CHECK(canonical_form(t1) == canonical_form(t2));
  CHECK(canonical_form(t1).alpha == canonical_form(t2).alpha);

  IrrTriple t3(RootOfUnity(1, 4), one, one);  // a character: different class
  CHECK(!(t1 == t3));
}

TEST_CASE("canonical form fixes characters and base classes") {
  IrrTriple chr(RootOfUnity(2, 5), RootOfUnity(1, 3), one);
  CHECK(canonical_form(chr).alpha == RootOfUnity(2, 5));
  CHECK(canonical_form(chr).beta == RootOfUnity(1, 3));

  IrrTriple base(one, one, RootOfUnity(1, 3));
  CHECK(canonical_form(base).alpha == one);
  CHECK(canonical_form(base).beta == one);
  CHECK(canonical_form(base).zeta == RootOfUnity(1, 3));
}

TEST_CASE("canonical form is idempotent on torsion triples of level <= 24") {
  auto pts = roots_dividing(24);
  for (const auto& a : pts)
    for (const auto& b : pts)
      for (const auto& z : pts) {
        IrrTriple t(a, b, z);
        IrrTriple c = canonical_form(t);
        CHECK(canonical_form(c).alpha == c.alpha);
        CHECK(canonical_form(c).beta == c.beta);
        CHECK(c == t);
        CHECK(c.zeta == t.zeta);
      }
}

TEST_CASE("tensor of coprime-order base classes is a single class") {
  RepSum got = tensor_irr(IrrTriple(one, one, minus_one), IrrTriple(one, one, RootOfUnity(1, 3)));
  CHECK(got == V(RootOfUnity(5, 6)));
}

TEST_CASE("tensor square of the order-2 class is the four characters") {
  RepSum got = tensor_irr(IrrTriple(one, one, minus_one), IrrTriple(one, one, minus_one));
  RepSum want;
  want.add(IrrTriple(one, one, one));
  want.add(IrrTriple(minus_one, one, one));
  want.add(IrrTriple(one, minus_one, one));
  want.add(IrrTriple(minus_one, minus_one, one));
  CHECK(got == want);
}

TEST_CASE("tensor square of the order-3 class has multiplicity 3") {
  RootOfUnity z3(1, 3);
  RepSum got = tensor_irr(IrrTriple(one, one, z3), IrrTriple(one, one, z3));
  CHECK(got == V(z3 * z3, 3));
}

TEST_CASE("tensor with a character translates the triple") {
  IrrTriple a(one, one, RootOfUnity(1, 4));
  IrrTriple chr(RootOfUnity(1, 8), RootOfUnity(1, 2), one);
  RepSum got = tensor_irr(a, chr);
  RepSum want;
  want.add(IrrTriple(RootOfUnity(1, 8), RootOfUnity(1, 2), RootOfUnity(1, 4)));
  CHECK(got == want);
}

TEST_CASE("tensor is commutative for all orders up to 6") {
  auto roots = roots_with_orders({1, 2, 3, 4, 5, 6});
  for (const auto& z : roots)
    for (const auto& w : roots) {
      IrrTriple a(one, one, z), b(one, one, w);
      CHECK(tensor_irr(a, b) == tensor_irr(b, a));
    }
}

TEST_CASE("tensor is associative on sums for all orders up to 6") {
  auto roots = roots_with_orders({1, 2, 3, 4, 5, 6});
  for (const auto& z1 : roots)
    for (const auto& z2 : roots)
      for (const auto& z3 : roots) {
        RepSum left = tensor_rep(tensor_irr(IrrTriple(one, one, z1), IrrTriple(one, one, z2)),
                                 V(z3));
        RepSum right = tensor_rep(V(z1),
                                  tensor_irr(IrrTriple(one, one, z2), IrrTriple(one, one, z3)));
        CHECK(left == right);
      }
}

TEST_CASE("dimension is multiplicative under tensor for orders up to 12") {
  std::vector<RootOfUnity> roots;
  for (long m = 1; m <= 12; ++m)
    for (const auto& z : roots_of_order(m)) roots.push_back(z);
  for (const auto& z : roots)
    for (const auto& w : roots) {
      RepSum prod = tensor_irr(IrrTriple(one, one, z), IrrTriple(one, one, w));
      CHECK(prod.total_dim() == mpz_class(z.order()) * w.order());
    }
}

TEST_CASE("character translation commutes with tensor") {
  auto roots = roots_with_orders({2, 3, 4, 6});
  RootOfUnity c1(1, 4), c2(1, 6);
  for (const auto& z : roots)
    for (const auto& w : roots) {
      IrrTriple a(one, one, z), b(one, one, w);
      IrrTriple a_tw(c1, c2, z);
      RepSum direct = tensor_irr(a_tw, b);
      RepSum translated = translate_rep(tensor_irr(a, b), c1, c2);
      CHECK(direct == translated);
    }
}

TEST_CASE("induced matrices of the order-2 base class") {
  InducedRep rep = induced_matrices(IrrTriple(one, one, minus_one));
  long lv = rep.level;
  CHECK(rep.x.at(0, 1) == CycloNumber::one(lv));
  CHECK(rep.x.at(1, 0) == CycloNumber::one(lv));
  CHECK(rep.x.at(0, 0).is_zero());
  CHECK(rep.y.at(0, 0) == CycloNumber::one(lv));
  CHECK(rep.y.at(1, 1) == CycloNumber::from_rational(-1, lv));
  CHECK(rep.z.at(0, 0) == CycloNumber::from_rational(-1, lv));
  CHECK(rep.z.at(1, 1) == CycloNumber::from_rational(-1, lv));
}

TEST_CASE("characters induce 1x1 matrices") {
  IrrTriple chr(RootOfUnity(1, 3), RootOfUnity(1, 4), one);
  InducedRep rep = induced_matrices(chr);
  CHECK(rep.x.size() == 1);
  CHECK(rep.x.at(0, 0) == CycloNumber::from_root(RootOfUnity(1, 3), rep.level));
  CHECK(rep.y.at(0, 0) == CycloNumber::from_root(RootOfUnity(1, 4), rep.level));
  CHECK(rep.z.at(0, 0) == CycloNumber::one(rep.level));
}

TEST_CASE("induced matrices satisfy the scalar and trace identities") {
  auto pts = roots_dividing(6);
  for (const auto& a : pts)
    for (const auto& z : roots_with_orders({1, 2, 3, 4, 6})) {
      IrrTriple t(a, a.pow(2), z);
      InducedRep rep = induced_matrices(t);  // relations asserted inside
      long r = t.dim();
      auto key = t.key();
      CycloMatrix xr = rep.x, yr = rep.y;
      for (long i = 1; i < r; ++i) {
        xr = xr * rep.x;
        yr = yr * rep.y;
      }
      CHECK(xr == CycloMatrix::identity(int(r), rep.level).scaled(CycloNumber::from_root(key[0], rep.level)));
      CHECK(yr == CycloMatrix::identity(int(r), rep.level).scaled(CycloNumber::from_root(key[1], rep.level)));
      // trace of the z image is r * zeta
      CHECK(rep.z.trace() == CycloNumber::from_root(t.zeta, rep.level) * mpq_class(r));
    }
}

TEST_CASE("brute force: trivial tensor trivial is trivial") {
  RepSum got = decompose_tensor_bruteforce(IrrTriple(one, one, one), IrrTriple(one, one, one), 2);
  RepSum want;
  want.add(IrrTriple(one, one, one));
  CHECK(got == want);
}

TEST_CASE("brute force at N=2 recovers the four characters") {
  RepSum got =
      decompose_tensor_bruteforce(IrrTriple(one, one, minus_one), IrrTriple(one, one, minus_one), 2);
  CHECK(got == tensor_irr(IrrTriple(one, one, minus_one), IrrTriple(one, one, minus_one)));
}

TEST_CASE("brute force rejects roots of non-dividing order") {
  CHECK_THROWS_AS(
      decompose_tensor_bruteforce(IrrTriple(one, one, RootOfUnity(1, 4)), IrrTriple(one, one, one), 6),
      std::invalid_argument);
  // alpha of order 8 cannot factor through H(Z/2) when zeta has order 2
  CHECK_THROWS_AS(
      decompose_tensor_bruteforce(IrrTriple(RootOfUnity(1, 8), one, minus_one), IrrTriple(one, one, one), 2),
      std::invalid_argument);
}

TEST_CASE("formula agrees with the character oracle at level 6") {
  auto roots = roots_with_orders({1, 2, 3, 6});
  for (const auto& z : roots)
    for (const auto& w : roots) {
      IrrTriple a(one, one, z), b(one, one, w);
      CHECK(tensor_irr(a, b) == decompose_tensor_bruteforce(a, b, 6));
    }
}

TEST_CASE("formula agrees with the character oracle on translated classes at level 12") {
  IrrTriple a(RootOfUnity(1, 3), one, RootOfUnity(1, 4));
  IrrTriple b(one, RootOfUnity(1, 2), RootOfUnity(3, 4));
  CHECK(tensor_irr(a, b) == decompose_tensor_bruteforce(a, b, 12));

  IrrTriple c(one, one, RootOfUnity(1, 6));
  IrrTriple d(RootOfUnity(1, 2), one, RootOfUnity(1, 4));
  CHECK(tensor_irr(c, d) == decompose_tensor_bruteforce(c, d, 12));
}

TEST_CASE("character canonicalization is the r-th power map") {
  auto pr = canonicalize_character({RootOfUnity(1, 4), RootOfUnity(1, 4)}, minus_one);
  CHECK(pr.first == minus_one);
  CHECK(pr.second == minus_one);

  auto id = canonicalize_character({RootOfUnity(2, 7), RootOfUnity(3, 5)}, one);
  CHECK(id.first == RootOfUnity(2, 7));
  CHECK(id.second == RootOfUnity(3, 5));
}

TEST_CASE("character canonicalization is constant on I_zeta orbits") {
  RootOfUnity zeta = minus_one;
  std::pair<RootOfUnity, RootOfUnity> chi{RootOfUnity(1, 4), RootOfUnity(3, 4)};
  auto want = canonicalize_character(chi, zeta);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j) {
      auto got = canonicalize_character({chi.first * zeta.pow(i), chi.second * zeta.pow(j)}, zeta);
      CHECK(got == want);
    }
}

TEST_CASE("character map fibers have size r^2 on torsion points") {
  // over mu_M x mu_M the map (chi1,chi2) -> (chi1^r, chi2^r) has fibers of
  // size r^2 whenever r divides M
  const long M = 12;
  for (long r : {2L, 3L, 4L}) {
    RootOfUnity zeta(1, r);
    std::map<std::pair<RootOfUnity, RootOfUnity>, long> fiber_size;
    for (const auto& x : roots_dividing(M))
      for (const auto& y : roots_dividing(M)) ++fiber_size[canonicalize_character({x, y}, zeta)];
    for (const auto& [key, count] : fiber_size) CHECK(count == r * r);
  }
}
