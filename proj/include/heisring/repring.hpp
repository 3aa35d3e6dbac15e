#pragma once

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heisring/coeff.hpp"
#include "heisring/cyclo.hpp"

namespace heisring {

// ---------------------------------------------------------------------------
// Generators of the graded ring: one a (degree 0), b, c (degree 1) and d
// (degree 2) per component zeta.
// ---------------------------------------------------------------------------

enum class GenKind : int { A = 0, B = 1, C = 2, D = 3 };

inline int gen_degree(GenKind k) {
  switch (k) {
    case GenKind::A: return 0;
    case GenKind::B:
    case GenKind::C: return 1;
    case GenKind::D: return 2;
  }
  return 0;
}

inline char gen_letter(GenKind k) { return "abcd"[static_cast<int>(k)]; }

inline GenKind gen_kind_from_letter(char c) {
  switch (c) {
    case 'a': return GenKind::A;
    case 'b': return GenKind::B;
    case 'c': return GenKind::C;
    case 'd': return GenKind::D;
  }
  throw std::invalid_argument(std::string("unknown generator kind '") + c + "'");
}

struct Generator {
  GenKind kind;
  RootOfUnity zeta;

  int degree() const { return gen_degree(kind); }
  std::string name() const { return std::string(1, gen_letter(kind)) + "[" + zeta.str() + "]"; }

  bool operator==(const Generator& o) const { return kind == o.kind && zeta == o.zeta; }
  // deterministic ordering: (degree, kind, zeta)
  auto operator<=>(const Generator& o) const {
    if (auto c = degree() <=> o.degree(); c != 0) return c;
    if (auto c = static_cast<int>(kind) <=> static_cast<int>(o.kind); c != 0) return c;
    return zeta <=> o.zeta;
  }
};

/// Product of two generators in the ring: the printed table
///   a_z a_w = (|z||w|/|zw|) a_{zw}        a_z b_w = |z| b_{zw}
///   a_z c_w = |z| c_{zw}                  a_z d_w = (|z||zw|/|w|) d_{zw}
///   b_z c_w = |zw| d_{zw}
/// extended by graded commutativity; b*b = c*c = 0 and everything of total
/// degree > 2 is 0 (the components are 2-tori).
inline std::pair<mpz_class, Generator> generator_product(const Generator& g, const Generator& h) {
  RootOfUnity prod = g.zeta * h.zeta;
  long r = g.zeta.order(), s = h.zeta.order(), t = prod.order();
  auto zero = [&] { return std::pair<mpz_class, Generator>{mpz_class(0), Generator{GenKind::D, prod}}; };

  GenKind gk = g.kind, hk = h.kind;
  if (g.degree() + h.degree() > 2) return zero();

  if (gk == GenKind::A && hk == GenKind::A) {
    mpz_class c(r);
    c *= s;
    mpz_class q = c / t;
    if (q * t != c) throw std::logic_error("generator_product: |z||w|/|zw| not integral");
    return {q, Generator{GenKind::A, prod}};
  }
  if (gk == GenKind::A || hk == GenKind::A) {
    long ord_a = (gk == GenKind::A) ? r : s;
    long ord_o = (gk == GenKind::A) ? s : r;
    GenKind other = (gk == GenKind::A) ? hk : gk;
    if (other == GenKind::B || other == GenKind::C) return {mpz_class(ord_a), Generator{other, prod}};
    // a * d
    mpz_class c(ord_a);
    c *= t;
    mpz_class q = c / ord_o;
    if (q * ord_o != c) throw std::logic_error("generator_product: |z||zw|/|w| not integral");
    return {q, Generator{GenKind::D, prod}};
  }
  if (gk == GenKind::B && hk == GenKind::C) return {mpz_class(t), Generator{GenKind::D, prod}};
  if (gk == GenKind::C && hk == GenKind::B) return {mpz_class(-t), Generator{GenKind::D, prod}};
  return zero();  // b*b, c*c
}

// ---------------------------------------------------------------------------
// Sparse graded element over an abstract coefficient ring (mpz_class for Z,
// ZMod for Z/ell^n); the two coefficient domains share this code path.
// ---------------------------------------------------------------------------

namespace coeff_ops {
inline bool is_zero(const mpz_class& c) { return c == 0; }
inline bool is_zero(const ZMod& c) { return c.is_zero(); }
inline mpz_class scale(const mpz_class& c, const mpz_class& k) { return c * k; }
inline ZMod scale(const ZMod& c, const mpz_class& k) { return c * k; }
}  // namespace coeff_ops

template <class Coeff>
class GradedElement {
public:
  using Terms = std::map<Generator, Coeff>;

  GradedElement() = default;

  static GradedElement term(const Generator& g, Coeff c) {
    GradedElement e;
    e.add_term(g, std::move(c));
    return e;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Generator& g, const Coeff& c) {
    if (coeff_ops::is_zero(c)) return;
    auto [it, fresh] = terms_.emplace(g, c);
    if (!fresh) {
      it->second = it->second + c;
      if (coeff_ops::is_zero(it->second)) terms_.erase(it);
    }
  }

  GradedElement operator+(const GradedElement& o) const {
    GradedElement r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, c);
    return r;
  }

  GradedElement operator-(const GradedElement& o) const {
    GradedElement r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, -c);
    return r;
  }

  GradedElement scaled(const Coeff& k) const {
    GradedElement r;
    for (const auto& [g, c] : terms_) r.add_term(g, c * k);
    return r;
  }

  GradedElement scaled_int(const mpz_class& k) const {
    GradedElement r;
    for (const auto& [g, c] : terms_) r.add_term(g, coeff_ops::scale(c, k));
    return r;
  }

  /// extract the part of homogeneous degree n
  GradedElement homogeneous(int n) const {
    GradedElement r;
    for (const auto& [g, c] : terms_)
      if (g.degree() == n) r.add_term(g, c);
    return r;
  }

  bool operator==(const GradedElement& o) const { return terms_ == o.terms_; }

private:
  Terms terms_;
};

/// Bilinear extension of the generator product table.
template <class Coeff>
GradedElement<Coeff> mul_graded(const GradedElement<Coeff>& u, const GradedElement<Coeff>& v) {
  GradedElement<Coeff> out;
  for (const auto& [g, cg] : u.terms())
    for (const auto& [h, ch] : v.terms()) {
      auto [k, target] = generator_product(g, h);
      if (k == 0) continue;
      out.add_term(target, coeff_ops::scale(cg * ch, k));
    }
  return out;
}

/// The dimension homomorphism: a_z -> |z| on degree 0, positive degrees -> 0,
/// optionally reduced mod ell.
inline mpz_class augment(const GradedElement<mpz_class>& u, std::optional<long> modulus = std::nullopt) {
  mpz_class total(0);
  for (const auto& [g, c] : u.terms())
    if (g.kind == GenKind::A) total += c * g.zeta.order();
  if (modulus) {
    mpz_class r;
    mpz_class m(*modulus);
    mpz_fdiv_r(r.get_mpz_t(), total.get_mpz_t(), m.get_mpz_t());
    return r;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Finite graded ring descriptions: a distinguished basis with degrees and a
// (possibly partial) table of structure constants.  These are the exchange
// format for Kunneth products and the ell-typical truncations.
// ---------------------------------------------------------------------------

struct BasisRing {
  struct Gen {
    std::string name;
    int degree;
  };

  std::vector<Gen> gens;
  // products[{i,j}] = sparse expansion of gens[i]*gens[j]; a missing entry
  // means the product leaves this truncated description
  std::map<std::pair<int, int>, std::map<int, mpz_class>> products;

  std::vector<long> ranks(int maxdeg) const {
    std::vector<long> out(maxdeg + 1, 0);
    for (const auto& g : gens)
      if (g.degree <= maxdeg) ++out[g.degree];
    return out;
  }

  bool total() const {
    return products.size() == gens.size() * gens.size();
  }
};

/// H_*(S^1): unit in degree 0, one exterior generator in degree 1.
inline BasisRing circle_ring() {
  BasisRing r;
  r.gens = {{"1", 0}, {"e", 1}};
  r.products[{0, 0}] = {{0, 1}};
  r.products[{0, 1}] = {{1, 1}};
  r.products[{1, 0}] = {{1, 1}};
  r.products[{1, 1}] = {};  // e^2 = 0
  return r;
}

/// Z concentrated in degree 0.
inline BasisRing trivial_ring() {
  BasisRing r;
  r.gens = {{"1", 0}};
  r.products[{0, 0}] = {{0, 1}};
  return r;
}

/// Tensor product of graded rings with the Koszul sign rule:
/// (x (X) y) * (x' (X) y') = (-1)^{|y||x'|} (x x') (X) (y y').
inline BasisRing kunneth_tensor(const BasisRing& a, const BasisRing& b) {
  if (!a.total() || !b.total())
    throw std::invalid_argument("kunneth_tensor: factors must carry total product tables");
  BasisRing r;
  const int nb = static_cast<int>(b.gens.size());
  for (const auto& ga : a.gens)
    for (const auto& gb : b.gens)
      r.gens.push_back({ga.name + "(X)" + gb.name, ga.degree + gb.degree});
  auto index = [nb](int i, int j) { return i * nb + j; };

  for (size_t i = 0; i < a.gens.size(); ++i)
    for (size_t j = 0; j < b.gens.size(); ++j)
      for (size_t k = 0; k < a.gens.size(); ++k)
        for (size_t l = 0; l < b.gens.size(); ++l) {
          std::map<int, mpz_class> expansion;
          const auto& pa = a.products.at({int(i), int(k)});
          const auto& pb = b.products.at({int(j), int(l)});
          bool negate = (b.gens[j].degree * a.gens[k].degree) % 2 != 0;
          for (const auto& [ti, ca] : pa)
            for (const auto& [tj, cb] : pb) {
              mpz_class c = ca * cb;
              if (negate) c = -c;
              if (c == 0) continue;
              auto& slot = expansion[index(ti, tj)];
              slot += c;
              if (slot == 0) expansion.erase(index(ti, tj));
            }
          r.products[{index(int(i), int(j)), index(int(k), int(l))}] = std::move(expansion);
        }
  return r;
}

// ---------------------------------------------------------------------------
// The Heisenberg component rings and their ell-typical truncations.
// ---------------------------------------------------------------------------

/// All four generators over each component in `components`.
inline std::vector<Generator> heisenberg_generators(const std::vector<RootOfUnity>& components) {
  std::vector<Generator> gens;
  for (GenKind k : {GenKind::A, GenKind::B, GenKind::C, GenKind::D})
    for (const auto& z : components) gens.push_back({k, z});
  std::sort(gens.begin(), gens.end());
  return gens;
}

/// Basis-ring description of the span of the Heisenberg generators over the
/// given components.  Products whose target component escapes the set are
/// left out of the table; `closed` (if given) reports whether any did.
inline BasisRing heisenberg_basis_ring(const std::vector<RootOfUnity>& components, bool* closed = nullptr) {
  std::set<RootOfUnity> comp_set(components.begin(), components.end());
  std::vector<Generator> gens = heisenberg_generators(components);
  BasisRing r;
  std::map<Generator, int> idx;
  for (const auto& g : gens) {
    idx[g] = static_cast<int>(r.gens.size());
    r.gens.push_back({g.name(), g.degree()});
  }
  bool all_inside = true;
  for (const auto& g : gens)
    for (const auto& h : gens) {
      auto [coef, target] = generator_product(g, h);
      if (coef == 0) {
        r.products[{idx[g], idx[h]}] = {};
        continue;
      }
      if (!comp_set.count(target.zeta)) {
        all_inside = false;
        continue;  // product leaves the truncation: entry stays absent
      }
      r.products[{idx[g], idx[h]}] = {{idx[target], coef}};
    }
  if (closed) *closed = all_inside;
  return r;
}

/// Components of ell-power order up to ell^K (there are ell^K of them).
inline std::vector<RootOfUnity> ell_power_components(long ell, int order_bound_exp) {
  std::vector<RootOfUnity> out;
  long q = 1;
  for (int j = 0; j <= order_bound_exp; ++j) {
    for (const auto& z : roots_of_order(q)) out.push_back(z);
    q *= ell;
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct PTypicalRestriction {
  std::vector<RootOfUnity> kept;
  BasisRing ring;
  bool closed = false;
};

/// Keep exactly the components of order in {1, ell, ..., ell^K}; the result
/// must be closed under the product table (verified, not assumed).
inline PTypicalRestriction restrict_p_typical(const std::vector<RootOfUnity>& components, long ell, int K) {
  if (K < 0) throw std::invalid_argument("restrict_p_typical: K must be >= 0");
  mpz_class bound = TruncatedPadic::pow_ell(ell, K);
  PTypicalRestriction out;
  for (const auto& z : components) {
    long m = z.order();
    bool power = true;
    long mm = m;
    while (mm > 1) {
      if (mm % ell != 0) { power = false; break; }
      mm /= ell;
    }
    if (power && mpz_class(m) <= bound) out.kept.push_back(z);
  }
  std::sort(out.kept.begin(), out.kept.end());
  out.ring = heisenberg_basis_ring(out.kept, &out.closed);
  return out;
}

// ---------------------------------------------------------------------------
// Independent oracle for the product table: each component of order m is the
// torus plane/L with L = (1/m)Z^2; multiplication is addition into
// plane/L_{dt} followed by the transfer of the d^2-fold covering
// plane/L_t -> plane/L_{dt}, scaled by the class multiplicity rs/(t d^2).
// The transfer is computed as duality . pullback . duality^{-1}, with the
// pullback on torus cohomology given by exterior powers of the dual lattice
// map.  No formula from the product table enters this computation.
// ---------------------------------------------------------------------------

/// 2x2 rational matrix whose columns span a lattice in the plane.
struct Lattice2 {
  mpq_class m[2][2];

  static Lattice2 scaled_standard(long denom) {
    Lattice2 l;
    l.m[0][0] = mpq_class(1, denom);
    l.m[0][1] = 0;
    l.m[1][0] = 0;
    l.m[1][1] = mpq_class(1, denom);
    return l;
  }

  /// integer coordinates of a rational vector in this basis; throws if the
  /// vector is not a lattice point
  std::array<mpz_class, 2> coords(const mpq_class& x, const mpq_class& y) const {
    mpq_class det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0) throw std::invalid_argument("Lattice2: degenerate basis");
    mpq_class c0 = (x * m[1][1] - y * m[0][1]) / det;
    mpq_class c1 = (y * m[0][0] - x * m[1][0]) / det;
    if (c0.get_den() != 1 || c1.get_den() != 1)
      throw std::runtime_error("Lattice2: vector is not a lattice point");
    return {mpz_class(c0.get_num()), mpz_class(c1.get_num())};
  }
};

namespace detail {

// integer coordinate matrix of the inclusion sub <= super
inline std::array<std::array<mpz_class, 2>, 2> inclusion_coords(const Lattice2& super, const Lattice2& sub) {
  auto c0 = super.coords(sub.m[0][0], sub.m[1][0]);
  auto c1 = super.coords(sub.m[0][1], sub.m[1][1]);
  return {{{c0[0], c1[0]}, {c0[1], c1[1]}}};
}

// transfer on H_1 in lattice coordinates: PD^{-1} . (dual map)^T . PD,
// conjugation of the transposed inclusion matrix by the duality pairing
inline std::array<std::array<mpz_class, 2>, 2> transfer_h1(const std::array<std::array<mpz_class, 2>, 2>& c) {
  // J = PD matrix [[0,1],[-1,0]]; result = J^{-1} C^T J
  const mpz_class &a = c[0][0], &b = c[0][1], &cc = c[1][0], &d = c[1][1];
  return {{{d, -b}, {-cc, a}}};
}

}  // namespace detail

/// Linear-part coefficient of gen1 * gen2 on the target generator of the
/// product component, computed from the torus model.  Rejects kind pairs of
/// total degree > 2 (those have no meaningful target).
inline mpz_class transfer_coefficient_oracle(const Generator& g1, const Generator& g2) {
  if (g1.degree() + g2.degree() > 2)
    throw std::invalid_argument("transfer_coefficient_oracle: unsupported generator pair " + g1.name() + ", " +
                                g2.name() + " (target degree > 2)");
  long r = g1.zeta.order(), s = g2.zeta.order();
  RootOfUnity prod = g1.zeta * g2.zeta;
  long t = prod.order();
  long L = std::lcm(r, s);
  long d = L / t;
  mpq_class multiplicity(mpz_class(r) * s, mpz_class(t) * d * d);
  multiplicity.canonicalize();

  Lattice2 lat_L = Lattice2::scaled_standard(L);
  Lattice2 lat_t = Lattice2::scaled_standard(t);
  auto incl = detail::inclusion_coords(lat_L, lat_t);  // L_t inside L_{dt}

  // H_1 vectors carried by b (first circle direction) and c (second)
  auto h1_vector = [&](const Generator& g) -> std::array<mpq_class, 2> {
    mpq_class inv(1, g.zeta.order());
    if (g.kind == GenKind::B) return {inv, mpq_class(0)};
    return {mpq_class(0), inv};
  };

  int deg = g1.degree() + g2.degree();
  mpq_class result;

  if (deg == 0) {
    // points add to points; transfer on H_0 is the covering degree
    mpz_class cover_deg = incl[0][0] * incl[1][1] - incl[0][1] * incl[1][0];
    result = multiplicity * cover_deg;
  } else if (deg == 1) {
    const Generator& ocomp = (g1.kind == GenKind::A) ? g2 : g1;
    auto v = h1_vector(ocomp);
    auto wc = lat_L.coords(v[0], v[1]);
    auto tr = detail::transfer_h1(incl);
    std::array<mpz_class, 2> uc = {tr[0][0] * wc[0] + tr[0][1] * wc[1], tr[1][0] * wc[0] + tr[1][1] * wc[1]};
    int expect = (ocomp.kind == GenKind::B) ? 0 : 1;
    if (uc[1 - expect] != 0)
      throw std::logic_error("transfer_coefficient_oracle: unexpected cross term in degree 1");
    result = multiplicity * uc[expect];
  } else {
    // degree 2: the class is an element of the second exterior power
    mpq_class wedge;
    if ((g1.kind == GenKind::A && g2.kind == GenKind::D) || (g1.kind == GenKind::D && g2.kind == GenKind::A)) {
      const Generator& dcomp = (g1.kind == GenKind::D) ? g1 : g2;
      Lattice2 lat_m = Lattice2::scaled_standard(dcomp.zeta.order());
      auto c = detail::inclusion_coords(lat_L, lat_m);
      wedge = c[0][0] * c[1][1] - c[0][1] * c[1][0];  // exterior square of the inclusion
    } else {
      auto v1 = h1_vector(g1);
      auto v2 = h1_vector(g2);
      auto c1 = lat_L.coords(v1[0], v1[1]);
      auto c2 = lat_L.coords(v2[0], v2[1]);
      wedge = c1[0] * c2[1] - c1[1] * c2[0];  // may be degenerate (parallel cycles)
    }
    // transfer on H_2 carries fundamental class to fundamental class
    result = multiplicity * wedge;
  }

  result.canonicalize();
  if (result.get_den() != 1)
    throw std::logic_error("transfer_coefficient_oracle: non-integral transfer coefficient");
  return mpz_class(result.get_num());
}

}  // namespace heisring
