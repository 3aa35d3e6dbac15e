#include "heisring/repring.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "heisring/heis_irr.hpp"

using namespace heisring;

namespace {

const RootOfUnity one;
const RootOfUnity minus_one(1, 2);

using ZElt = GradedElement<mpz_class>;

ZElt gen(GenKind k, const RootOfUnity& z, long coeff = 1) {
  return ZElt::term({k, z}, mpz_class(coeff));
}

std::vector<RootOfUnity> roots_up_to(long maxorder) {
  std::vector<RootOfUnity> out;
  for (long m = 1; m <= maxorder; ++m)
    for (const auto& z : roots_of_order(m)) out.push_back(z);
  return out;
}

std::vector<Generator> all_generators(long maxorder) {
  return heisenberg_generators(roots_up_to(maxorder));
}

}  // namespace

TEST_CASE("printed product formulas at small orders") {
  CHECK(mul_graded(gen(GenKind::A, minus_one), gen(GenKind::A, minus_one)) == gen(GenKind::A, one, 4));
  CHECK(mul_graded(gen(GenKind::B, minus_one), gen(GenKind::C, one)) == gen(GenKind::D, minus_one, 2));
  CHECK(mul_graded(gen(GenKind::A, RootOfUnity(1, 3)), gen(GenKind::B, RootOfUnity(1, 4))) ==
        gen(GenKind::B, RootOfUnity(7, 12), 3));
  CHECK(mul_graded(gen(GenKind::A, minus_one), gen(GenKind::D, RootOfUnity(1, 4))).terms().begin()->second == 2);
}

TEST_CASE("a_1 is the unit") {
  ZElt unit = gen(GenKind::A, one);
  for (const auto& g : all_generators(6)) {
    ZElt x = ZElt::term(g, mpz_class(7));
    CHECK(mul_graded(unit, x) == x);
    CHECK(mul_graded(x, unit) == x);
  }
}

TEST_CASE("squares of odd generators and all degree > 2 products vanish") {
  for (const auto& z : roots_up_to(6))
    for (const auto& w : roots_up_to(6)) {
      CHECK(mul_graded(gen(GenKind::B, z), gen(GenKind::B, w)).is_zero());
      CHECK(mul_graded(gen(GenKind::C, z), gen(GenKind::C, w)).is_zero());
      CHECK(mul_graded(gen(GenKind::B, z), gen(GenKind::D, w)).is_zero());
      CHECK(mul_graded(gen(GenKind::D, z), gen(GenKind::C, w)).is_zero());
      CHECK(mul_graded(gen(GenKind::D, z), gen(GenKind::D, w)).is_zero());
    }
}

TEST_CASE("multiplication is associative and graded-commutative up to order 8") {
  auto gens = all_generators(8);
  std::vector<ZElt> elts;
  elts.reserve(gens.size());
  for (const auto& g : gens) elts.push_back(ZElt::term(g, mpz_class(1)));

  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < gens.size(); ++j) {
      ZElt uv = mul_graded(elts[i], elts[j]);
      ZElt vu = mul_graded(elts[j], elts[i]);
      bool odd = (gens[i].degree() * gens[j].degree()) % 2 != 0;
      CHECK(uv == (odd ? vu.scaled_int(mpz_class(-1)) : vu));
      for (size_t k = 0; k < gens.size(); ++k) {
        if (gens[i].degree() + gens[j].degree() + gens[k].degree() > 2) continue;  // both sides vanish
        CHECK(mul_graded(uv, elts[k]) == mul_graded(elts[i], mul_graded(elts[j], elts[k])));
      }
    }

  // and a spot check that the degree > 2 triples really do vanish on both sides
  ZElt b = gen(GenKind::B, minus_one), c = gen(GenKind::C, one), d = gen(GenKind::D, one);
  CHECK(mul_graded(mul_graded(b, c), d).is_zero());
  CHECK(mul_graded(b, mul_graded(c, d)).is_zero());
}

TEST_CASE("product coefficients are integral for all orders up to 24") {
  for (const auto& z : roots_up_to(24))
    for (const auto& w : roots_up_to(24)) {
      // throws on non-integrality
      mul_graded(gen(GenKind::A, z), gen(GenKind::A, w));
      mul_graded(gen(GenKind::A, z), gen(GenKind::D, w));
    }
}

TEST_CASE("augmentation sends a_z to |z| and kills positive degrees") {
  CHECK(augment(gen(GenKind::A, RootOfUnity(1, 3))) == 3);
  CHECK(augment(gen(GenKind::B, RootOfUnity(1, 5))) == 0);
  CHECK(augment(mul_graded(gen(GenKind::A, minus_one), gen(GenKind::A, minus_one))) == 4);
  CHECK(augment(gen(GenKind::A, RootOfUnity(1, 3)), 2) == 1);  // 3 mod 2
}

TEST_CASE("augmentation is a ring homomorphism in degree 0 up to order 8") {
  for (const auto& z : roots_up_to(8))
    for (const auto& w : roots_up_to(8)) {
      ZElt u = gen(GenKind::A, z, 2), v = gen(GenKind::A, w, -3);
      CHECK(augment(mul_graded(u, v)) == augment(u) * augment(v));
      CHECK(augment(u + v) == augment(u) + augment(v));
    }
}

TEST_CASE("kunneth of two circles is the 2-torus") {
  BasisRing torus = kunneth_tensor(circle_ring(), circle_ring());
  CHECK(torus.ranks(3) == std::vector<long>{1, 2, 1, 0});
  // the square of any degree-1 generator vanishes under the sign rule
  for (size_t i = 0; i < torus.gens.size(); ++i)
    if (torus.gens[i].degree == 1) CHECK(torus.products.at({int(i), int(i)}).empty());
}

TEST_CASE("tensor with the trivial ring changes nothing") {
  BasisRing a = circle_ring();
  BasisRing t = kunneth_tensor(a, trivial_ring());
  REQUIRE(t.gens.size() == a.gens.size());
  for (size_t i = 0; i < a.gens.size(); ++i) CHECK(t.gens[i].degree == a.gens[i].degree);
  for (size_t i = 0; i < a.gens.size(); ++i)
    for (size_t j = 0; j < a.gens.size(); ++j)
      CHECK(t.products.at({int(i), int(j)}) == a.products.at({int(i), int(j)}));
}

TEST_CASE("kunneth rank counts multiply as graded rings") {
  BasisRing torus = kunneth_tensor(circle_ring(), circle_ring());
  BasisRing three = kunneth_tensor(torus, circle_ring());
  CHECK(three.ranks(3) == std::vector<long>{1, 3, 3, 1});
}

TEST_CASE("p-typical restriction keeps exactly the ell-power components") {
  std::vector<RootOfUnity> comps;
  for (long m : {1L, 2L, 3L, 4L})
    for (const auto& z : roots_of_order(m)) comps.push_back(z);
  auto res = restrict_p_typical(comps, 2, 2);
  std::vector<long> orders;
  for (const auto& z : res.kept) orders.push_back(z.order());
  CHECK(orders == std::vector<long>{1, 2, 4, 4});
  CHECK(res.closed);
}

TEST_CASE("p-typical restriction is closed under products") {
  for (long ell : {2L, 3L, 5L}) {
    for (int K = 0; K <= 3; ++K) {
      auto comps = ell_power_components(ell, K);
      if (comps.size() > 32) continue;  // keep the sweep desk-sized
      bool closed = false;
      heisenberg_basis_ring(comps, &closed);
      CHECK(closed);
    }
  }
}

TEST_CASE("K = 0 restriction is the rank (1,2,1) identity component") {
  auto res = restrict_p_typical(roots_up_to(4), 2, 0);
  CHECK(res.kept == std::vector<RootOfUnity>{one});
  CHECK(res.ring.ranks(2) == std::vector<long>{1, 2, 1});
}

TEST_CASE("transfer oracle reproduces the printed examples") {
  CHECK(transfer_coefficient_oracle({GenKind::B, minus_one}, {GenKind::C, minus_one}) == 1);
  CHECK(transfer_coefficient_oracle({GenKind::A, one}, {GenKind::B, RootOfUnity(1, 3)}) == 1);
  CHECK(transfer_coefficient_oracle({GenKind::A, one}, {GenKind::D, RootOfUnity(1, 4)}) == 1);
  CHECK(transfer_coefficient_oracle({GenKind::B, minus_one}, {GenKind::B, RootOfUnity(1, 4)}) == 0);
}

TEST_CASE("transfer oracle rejects pairs of target degree > 2") {
  CHECK_THROWS_AS(transfer_coefficient_oracle({GenKind::B, one}, {GenKind::D, one}), std::invalid_argument);
  CHECK_THROWS_AS(transfer_coefficient_oracle({GenKind::D, one}, {GenKind::D, minus_one}), std::invalid_argument);
}

TEST_CASE("transfer oracle certifies the whole table up to order 8") {
  auto gens = all_generators(8);
  for (const auto& g : gens)
    for (const auto& h : gens) {
      if (g.degree() + h.degree() > 2) continue;
      auto [coef, target] = generator_product(g, h);
      mpz_class oracle = transfer_coefficient_oracle(g, h);
      CHECK(oracle == coef);
      CHECK(target.zeta == g.zeta * h.zeta);
    }
}

TEST_CASE("degree 0 ring matches the class counts of the tensor rule") {
  for (const auto& z : roots_up_to(6))
    for (const auto& w : roots_up_to(6)) {
      auto [coef, target] = generator_product(Generator{GenKind::A, z}, Generator{GenKind::A, w});
      RepSum ts = tensor_irr(IrrTriple(one, one, z), IrrTriple(one, one, w));
      mpz_class count(0);
      for (const auto& [t, m] : ts.terms()) count += m;
      CHECK(coef == count);
      CHECK(target.zeta == z * w);
    }
}

TEST_CASE("mod ell^n coefficients follow the integer table") {
  mpz_class mod(8);
  using MElt = GradedElement<ZMod>;
  for (const auto& z : roots_up_to(4))
    for (const auto& w : roots_up_to(4)) {
      MElt u = MElt::term({GenKind::A, z}, ZMod(3, mod));
      MElt v = MElt::term({GenKind::A, w}, ZMod(5, mod));
      MElt prod = mul_graded(u, v);
      auto [coef, target] = generator_product(Generator{GenKind::A, z}, Generator{GenKind::A, w});
      ZMod expect(15 * coef, mod);
      if (expect.is_zero())
        CHECK(prod.is_zero());
      else
        CHECK(prod == MElt::term(target, expect));
    }
}

TEST_CASE("mixed moduli are rejected") {
  using MElt = GradedElement<ZMod>;
  MElt u = MElt::term({GenKind::A, one}, ZMod(1, mpz_class(8)));
  MElt v = MElt::term({GenKind::A, minus_one}, ZMod(1, mpz_class(9)));
  CHECK_THROWS_AS(mul_graded(u, v), std::invalid_argument);
  CHECK_THROWS_AS(ZMod(1, mpz_class(4)) + ZMod(1, mpz_class(8)), std::invalid_argument);
}

TEST_CASE("homogeneous extraction and sparsity") {
  ZElt mixed = gen(GenKind::A, one, 2) + gen(GenKind::B, one, 3) + gen(GenKind::D, minus_one, -1);
  CHECK(mixed.homogeneous(0) == gen(GenKind::A, one, 2));
  CHECK(mixed.homogeneous(1) == gen(GenKind::B, one, 3));
  CHECK(mixed.homogeneous(2) == gen(GenKind::D, minus_one, -1));
  ZElt cancel = gen(GenKind::B, one, 5) + gen(GenKind::B, one, -5);
  CHECK(cancel.is_zero());
  CHECK(cancel.terms().empty());
}
