#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "heisring/coeff.hpp"
#include "heisring/homalg.hpp"
#include "heisring/repring.hpp"

namespace heisring {

struct CompletionParams {
  long ell = 2;
  int n_max = 1;          // precision bound: levels Z/ell^n for n = 1..n_max
  int order_bound_exp = 0;  // K: components zeta with |zeta| <= ell^K

  void validate() const {
    if (!is_prime(ell)) throw std::invalid_argument("CompletionParams: ell must be prime");
    if (n_max < 1) throw std::invalid_argument("CompletionParams: precision must be >= 1");
    if (order_bound_exp < 0) throw std::invalid_argument("CompletionParams: order bound must be >= 0");
  }
};

struct NamedCheck {
  std::string name;
  bool pass = false;
  std::string witness;  // evidence or counterexample
};

inline bool all_pass(const std::vector<NamedCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

/// Tower over n = 1..n_max of graded free Z/ell^n-modules on a shared
/// labeled basis, with reduction transitions (surjective by construction;
/// the checks verify it anyway, together with composite compatibility).
struct ProGradedModule {
  CompletionParams params;
  std::map<int, long> rank_by_degree;

  long rank(int degree) const {
    auto it = rank_by_degree.find(degree);
    return it == rank_by_degree.end() ? 0 : it->second;
  }

  mpz_class modulus_at(int level) const { return TruncatedPadic::pow_ell(params.ell, level); }

  /// reduction of a coefficient to a lower level of the tower
  ZMod reduce(const ZMod& c, int to_level) const {
    return ZMod(c.value(), modulus_at(to_level));
  }

  std::vector<NamedCheck> transition_checks() const {
    std::vector<NamedCheck> out;
    bool surj = true, comp = true;
    for (int n = params.n_max; n >= 2; --n) {
      // reduction Z/ell^n -> Z/ell^(n-1) hits every residue
      mpz_class target = modulus_at(n - 1);
      for (mpz_class v(0); v < target; ++v) {
        ZMod lifted(v, modulus_at(n));
        if (!(reduce(lifted, n - 1) == ZMod(v, target))) surj = false;
      }
    }
    for (int n = params.n_max; n >= 3; --n) {
      mpz_class probe(1234567);
      ZMod top(probe, modulus_at(n));
      if (!(reduce(reduce(top, n - 1), n - 2) == reduce(top, n - 2))) comp = false;
    }
    out.push_back({"transitions_surjective", surj, surj ? "all residues lift" : "missing residue"});
    out.push_back({"transition_composites_agree", comp, ""});
    return out;
  }
};

// ---------------------------------------------------------------------------
// The tower {R~/ell^n}: the ell-typical ring with its product table reduced
// mod ell^n at every level.
// ---------------------------------------------------------------------------

struct ModLnTower {
  CompletionParams params;
  std::vector<RootOfUnity> components;  // ell-power orders <= ell^K
  std::vector<Generator> basis;
  ProGradedModule module;
  std::vector<NamedCheck> checks;

  std::vector<long> graded_ranks(int maxdeg = 3) const {
    std::vector<long> out(maxdeg + 1, 0);
    for (int d = 0; d <= maxdeg; ++d) out[d] = module.rank(d);
    return out;
  }

  /// product of two basis generators at a given level of the tower
  GradedElement<ZMod> product_at_level(const Generator& g, const Generator& h, int level) const {
    auto [coef, target] = generator_product(g, h);
    GradedElement<ZMod> out;
    out.add_term(target, ZMod(coef, module.modulus_at(level)));
    return out;
  }

  bool all_pass() const { return heisring::all_pass(checks); }
};

inline ModLnTower mod_ln_tower(const CompletionParams& params) {
  params.validate();
  ModLnTower tower;
  tower.params = params;
  tower.components = ell_power_components(params.ell, params.order_bound_exp);
  tower.basis = heisenberg_generators(tower.components);
  tower.module.params = params;
  for (const auto& g : tower.basis) ++tower.module.rank_by_degree[g.degree()];

  // closure of the ell-typical component set under the product table
  bool closed = false;
  heisenberg_basis_ring(tower.components, &closed);
  tower.checks.push_back({"p_typical_closed", closed, closed ? "" : "a product left the component set"});

  // rank bookkeeping: (ell^K, 2 ell^K, ell^K, 0, ...)
  long q = 1;
  for (int i = 0; i < params.order_bound_exp; ++i) q *= params.ell;
  bool ranks_ok = tower.module.rank(0) == q && tower.module.rank(1) == 2 * q && tower.module.rank(2) == q &&
                  tower.module.rank(3) == 0;
  tower.checks.push_back({"graded_ranks", ranks_ok,
                          "(" + std::to_string(tower.module.rank(0)) + ", " + std::to_string(tower.module.rank(1)) +
                              ", " + std::to_string(tower.module.rank(2)) + ", 0)"});

  // at every level the table is the integer table reduced mod ell^n
  bool tables_ok = true;
  for (int n = 1; n <= params.n_max && tables_ok; ++n) {
    mpz_class mod = tower.module.modulus_at(n);
    for (const auto& g : tower.basis)
      for (const auto& h : tower.basis) {
        auto [coef, target] = generator_product(g, h);
        GradedElement<ZMod> got = tower.product_at_level(g, h, n);
        GradedElement<ZMod> want;
        want.add_term(target, ZMod(coef, mod));
        if (!(got == want)) tables_ok = false;
      }
  }
  tower.checks.push_back({"table_reduces_mod_ln", tables_ok, ""});

  // ring structure survives reduction: associativity at every level
  bool assoc_ok = true;
  for (int n = 1; n <= params.n_max && assoc_ok; ++n) {
    mpz_class mod = tower.module.modulus_at(n);
    std::vector<GradedElement<ZMod>> elts;
    elts.reserve(tower.basis.size());
    for (const auto& g : tower.basis) elts.push_back(GradedElement<ZMod>::term(g, ZMod(1, mod)));
    for (size_t i = 0; i < elts.size() && assoc_ok; ++i)
      for (size_t j = 0; j < elts.size() && assoc_ok; ++j)
        for (size_t k = 0; k < elts.size(); ++k) {
          if (tower.basis[i].degree() + tower.basis[j].degree() + tower.basis[k].degree() > 2) continue;
          if (!(mul_graded(mul_graded(elts[i], elts[j]), elts[k]) ==
                mul_graded(elts[i], mul_graded(elts[j], elts[k])))) {
            assoc_ok = false;
            break;
          }
        }
  }
  tower.checks.push_back({"ring_associative_at_each_level", assoc_ok, ""});

  auto trans = tower.module.transition_checks();
  tower.checks.insert(tower.checks.end(), trans.begin(), trans.end());
  return tower;
}

// ---------------------------------------------------------------------------
// Idempotents attached to components of order coprime to ell.
// ---------------------------------------------------------------------------

/// e_zeta = (1/|zeta|) sum_k a_{zeta^k} / |zeta^k| over Z/ell^n; requires
/// gcd(|zeta|, ell) = 1 so every order involved is a unit.
inline GradedElement<ZMod> idempotent_e(const RootOfUnity& zeta, long ell, int precision) {
  if (!is_prime(ell)) throw std::invalid_argument("idempotent_e: ell must be prime");
  if (precision < 1) throw std::invalid_argument("idempotent_e: precision must be >= 1");
  if (zeta.order() % ell == 0)
    throw std::invalid_argument("idempotent_e: |zeta| = " + std::to_string(zeta.order()) +
                                " is divisible by ell = " + std::to_string(ell) +
                                "; the averaging denominators are not units mod ell^n");
  mpz_class mod = TruncatedPadic::pow_ell(ell, precision);
  ZMod inv_order = ZMod(zeta.order(), mod).inverse();
  GradedElement<ZMod> e;
  for (long k = 1; k <= zeta.order(); ++k) {
    RootOfUnity zk = zeta.pow(k);
    ZMod coeff = inv_order * ZMod(zk.order(), mod).inverse().value();
    e.add_term({GenKind::A, zk}, coeff);
  }
  return e;
}

struct IdempotentReport {
  RootOfUnity zeta;
  long ell = 2;
  int precision = 1;
  GradedElement<ZMod> e;
  std::vector<NamedCheck> checks;
  bool all_pass() const { return heisring::all_pass(checks); }
};

inline IdempotentReport idempotent_report(const RootOfUnity& zeta, long ell, int precision) {
  IdempotentReport rep;
  rep.zeta = zeta;
  rep.ell = ell;
  rep.precision = precision;
  rep.e = idempotent_e(zeta, ell, precision);
  mpz_class mod = TruncatedPadic::pow_ell(ell, precision);

  GradedElement<ZMod> square = mul_graded(rep.e, rep.e);
  rep.checks.push_back({"idempotent", square == rep.e, ""});

  // e * (|zeta| - a_zeta) = 0: the kernel of e is the ideal (|zeta| - a_zeta)
  GradedElement<ZMod> kernel_gen = GradedElement<ZMod>::term({GenKind::A, RootOfUnity()}, ZMod(zeta.order(), mod)) -
                                   GradedElement<ZMod>::term({GenKind::A, zeta}, ZMod(1, mod));
  GradedElement<ZMod> zero = mul_graded(rep.e, kernel_gen);
  rep.checks.push_back({"kills_kernel_generator", zero.is_zero(), ""});
  return rep;
}

// ---------------------------------------------------------------------------
// The splitting of the degree-0 ring: quotient by a_zeta - |zeta| for zeta
// coprime to ell against the ell-typical subring.
// ---------------------------------------------------------------------------

struct SplitReport {
  long ell = 2;
  int precision = 1;
  long mixed_order_bound = 1;  // components form mu_M
  std::vector<RootOfUnity> components;
  std::vector<RootOfUnity> ell_typical;                       // ell-power components in mu_M
  std::vector<std::pair<RootOfUnity, std::pair<mpz_class, RootOfUnity>>> basis_map;  // a_x -> c * a_y
  std::vector<NamedCheck> checks;
  bool all_pass() const { return heisring::all_pass(checks); }
};

namespace detail {

// split x in mu_M into its ell-part and prime-to-ell part via Bezout
inline std::pair<RootOfUnity, RootOfUnity> ell_decomposition(const RootOfUnity& x, long ell) {
  long m = x.order(), ellpart = 1;
  while (m % ell == 0) {
    m /= ell;
    ellpart *= ell;
  }
  // extended gcd: alpha * m + beta * ellpart = 1
  long r0 = m, r1 = ellpart, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    std::tie(r0, r1) = std::pair<long, long>(r1, r0 - q * r1);
    std::tie(s0, s1) = std::pair<long, long>(s1, s0 - q * s1);
    std::tie(t0, t1) = std::pair<long, long>(t1, t0 - q * t1);
  }
  if (r0 != 1) throw std::logic_error("ell_decomposition: parts are not coprime");
  RootOfUnity ell_comp = x.pow(s0 * m);           // order divides ellpart
  RootOfUnity coprime_comp = x.pow(t0 * ellpart);  // order divides m
  if (!(ell_comp * coprime_comp == x)) throw std::logic_error("ell_decomposition: parts do not recombine");
  return {ell_comp, coprime_comp};
}

}  // namespace detail

inline SplitReport split_report(long ell, int precision, long mixed_order_bound) {
  if (!is_prime(ell)) throw std::invalid_argument("split_report: ell must be prime");
  if (precision < 1 || mixed_order_bound < 1) throw std::invalid_argument("split_report: bad bounds");
  SplitReport rep;
  rep.ell = ell;
  rep.precision = precision;
  rep.mixed_order_bound = mixed_order_bound;
  rep.components = roots_dividing(mixed_order_bound);
  mpz_class mod = TruncatedPadic::pow_ell(ell, precision);

  for (const auto& x : rep.components) {
    long m = x.order();
    while (m % ell == 0) m /= ell;
    if (m == 1) rep.ell_typical.push_back(x);
  }

  // the claimed isomorphism: a_x -> |x_coprime| * a_{x_ell}
  std::map<RootOfUnity, std::pair<mpz_class, RootOfUnity>> phi;
  for (const auto& x : rep.components) {
    auto [xl, xc] = detail::ell_decomposition(x, ell);
    phi[x] = {mpz_class(xc.order()), xl};
    rep.basis_map.push_back({x, phi[x]});
  }

  auto apply_phi = [&](const GradedElement<ZMod>& u) {
    GradedElement<ZMod> out;
    for (const auto& [g, c] : u.terms()) {
      if (g.kind != GenKind::A) throw std::logic_error("split_report: phi is a degree-0 map");
      const auto& [scale, target] = phi.at(g.zeta);
      out.add_term({GenKind::A, target}, c * scale);
    }
    return out;
  };

  // phi is multiplicative on the degree-0 basis
  bool mult_ok = true;
  for (const auto& x : rep.components)
    for (const auto& y : rep.components) {
      GradedElement<ZMod> lhs = apply_phi(mul_graded(GradedElement<ZMod>::term({GenKind::A, x}, ZMod(1, mod)),
                                                     GradedElement<ZMod>::term({GenKind::A, y}, ZMod(1, mod))));
      GradedElement<ZMod> rhs = mul_graded(apply_phi(GradedElement<ZMod>::term({GenKind::A, x}, ZMod(1, mod))),
                                           apply_phi(GradedElement<ZMod>::term({GenKind::A, y}, ZMod(1, mod))));
      if (!(lhs == rhs)) mult_ok = false;
    }
  rep.checks.push_back({"phi_multiplicative", mult_ok, ""});

  // phi kills the ideal generators (a_zeta - |zeta|) a_xi, zeta coprime to ell
  bool kills_ok = true;
  for (const auto& z : rep.components) {
    if (z.order() == 1 || std::gcd(z.order(), ell) != 1) continue;
    for (const auto& xi : rep.components) {
      GradedElement<ZMod> gen =
          mul_graded(GradedElement<ZMod>::term({GenKind::A, z}, ZMod(1, mod)) -
                         GradedElement<ZMod>::term({GenKind::A, RootOfUnity()}, ZMod(z.order(), mod)),
                     GradedElement<ZMod>::term({GenKind::A, xi}, ZMod(1, mod)));
      if (!apply_phi(gen).is_zero()) kills_ok = false;
    }
  }
  rep.checks.push_back({"phi_kills_ideal", kills_ok, ""});

  // rank of the quotient of the degree-0 module by the ideal equals the
  // ell-typical rank: present over Z with the extra relations ell^n * e_i
  {
    const long N = long(rep.components.size());
    std::map<RootOfUnity, int> index;
    for (long i = 0; i < N; ++i) index[rep.components[size_t(i)]] = int(i);
    std::vector<std::vector<mpz_class>> rel_cols;
    for (const auto& z : rep.components) {
      if (z.order() == 1 || std::gcd(z.order(), ell) != 1) continue;
      for (const auto& xi : rep.components) {
        // (a_z - |z|) a_xi = (|z||xi|/|z xi|) a_{z xi} - |z| a_xi
        auto [coef, target] = generator_product(Generator{GenKind::A, z}, Generator{GenKind::A, xi});
        std::vector<mpz_class> col(size_t(N), mpz_class(0));
        col[size_t(index.at(target.zeta))] += coef;
        col[size_t(index.at(xi))] -= z.order();
        rel_cols.push_back(std::move(col));
      }
    }
    IntMatrix rel{int(N), int(rel_cols.size() + N)};
    for (size_t j = 0; j < rel_cols.size(); ++j)
      for (long i = 0; i < N; ++i) rel.at(int(i), int(j)) = rel_cols[j][size_t(i)];
    for (long i = 0; i < N; ++i) rel.at(int(i), int(rel_cols.size() + i)) = mod;  // ell^n coefficients
    InvariantFactors fs = quotient_group(int(N), rel);
    bool free_of_right_rank = long(fs.size()) == long(rep.ell_typical.size());
    for (const auto& f : fs)
      if (f != mod) free_of_right_rank = false;
    rep.checks.push_back({"quotient_free_of_ell_typical_rank", free_of_right_rank,
                          "rank " + std::to_string(fs.size()) + " vs " + std::to_string(rep.ell_typical.size())});
  }

  // idempotent route: e_zeta for a generator of the coprime part cuts out a
  // free module of the same rank
  {
    long m = mixed_order_bound;
    while (m % ell == 0) m /= ell;
    if (m > 1) {
      RootOfUnity zgen(1, m);
      GradedElement<ZMod> e = idempotent_e(zgen, ell, precision);
      const long N = long(rep.components.size());
      std::map<RootOfUnity, int> index;
      for (long i = 0; i < N; ++i) index[rep.components[size_t(i)]] = int(i);
      // matrix of multiplication by e on the degree-0 module
      IntMatrix em{int(N), int(N)};
      for (const auto& xi : rep.components) {
        GradedElement<ZMod> img = mul_graded(e, GradedElement<ZMod>::term({GenKind::A, xi}, ZMod(1, mod)));
        for (const auto& [g, c] : img.terms()) em.at(index.at(g.zeta), index.at(xi)) = c.value();
      }
      IntMatrix lift{int(N), 2 * int(N)};
      for (int i = 0; i < int(N); ++i)
        for (int j = 0; j < int(N); ++j) lift.at(i, j) = em.at(i, j);
      for (int i = 0; i < int(N); ++i) lift.at(i, int(N) + i) = mod;
      // image of e as an abelian group: span(columns, ell^n) / span(ell^n)
      IntMatrix modrel{int(N), int(N)};
      for (int i = 0; i < int(N); ++i) modrel.at(i, i) = mod;
      InvariantFactors image = lattice_pair_group(lift, modrel);
      bool rank_ok = long(image.size()) == long(rep.ell_typical.size());
      for (const auto& f : image)
        if (f != mod) rank_ok = false;
      rep.checks.push_back({"idempotent_route_rank_agreement", rank_ok,
                            "rank " + std::to_string(image.size()) + " vs " +
                                std::to_string(rep.ell_typical.size())});
    } else {
      rep.checks.push_back({"idempotent_route_rank_agreement", true, "no coprime components present"});
    }
  }

  return rep;
}

// ---------------------------------------------------------------------------
// I^2 inside (ell) for the ell-typical augmentation ideal.
// ---------------------------------------------------------------------------

struct ISquaredRow {
  RootOfUnity zeta, zeta2;
  mpz_class coefficient;
  bool divisible = false;
};

struct ISquaredReport {
  long ell = 2;
  int order_bound_exp = 0;
  std::vector<ISquaredRow> rows;
  bool pass = true;
};

/// For every pair of nontrivial ell-power components, ell divides the
/// product coefficient |z||z'|/|zz'|.
inline ISquaredReport i_squared_check(long ell, int order_bound_exp) {
  if (!is_prime(ell)) throw std::invalid_argument("i_squared_check: ell must be prime");
  ISquaredReport rep;
  rep.ell = ell;
  rep.order_bound_exp = order_bound_exp;
  auto comps = ell_power_components(ell, order_bound_exp);
  for (const auto& z : comps) {
    if (z.order() == 1) continue;  // a_1 is the unit, not in the ideal
    for (const auto& w : comps) {
      if (w.order() == 1) continue;
      auto [coef, target] = generator_product(Generator{GenKind::A, z}, Generator{GenKind::A, w});
      ISquaredRow row{z, w, coef, coef % ell == 0};
      if (!row.divisible) rep.pass = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The circle-case report in degree 0.
// ---------------------------------------------------------------------------

struct CircleCompletionReport {
  long p = 2;
  int s_max = 1;
  int k_window = 4;
  std::vector<IdealPowerResult> per_s;
  LimResult tower_limit;
  std::vector<std::string> lines;
  std::vector<NamedCheck> checks;
  bool all_pass() const { return heisring::all_pass(checks); }
};

/// Degree-0 shadow of the completed circle: the ideal-power quotients
/// stabilize to Z/p^s and their tower has limit Z_p at the requested
/// precision.  Degree 1 is intentionally reported as out of reach of this
/// algebraic model; the caveat line is part of the contract.
inline CircleCompletionReport circle_completion_report(long p, int s_max, int k_window = 4) {
  if (!is_prime(p)) throw std::invalid_argument("circle_completion_report: p must be prime");
  if (s_max < 1) throw std::invalid_argument("circle_completion_report: s_max must be >= 1");
  CircleCompletionReport rep;
  rep.p = p;
  rep.s_max = s_max;
  rep.k_window = k_window;

  bool stable_ok = true;
  for (int s = 1; s <= s_max; ++s) {
    rep.per_s.push_back(ideal_power_quotient(p, 1, s, true, k_window));
    mpz_class ps(1);
    for (int i = 0; i < s; ++i) ps *= p;
    const auto& r = rep.per_s.back();
    if (!(r.stabilized && r.colimit == InvariantFactors{ps})) stable_ok = false;
  }
  rep.checks.push_back({"colimits_stabilize_to_Z_mod_p_s", stable_ok, ""});

  // the tower Z/p <- Z/p^2 <- ... <- Z/p^{s_max} of stabilized groups
  TowerWindow tw;
  mpz_class ps(1);
  for (int s = 1; s <= s_max; ++s) {
    ps *= p;
    tw.groups.push_back(PresentedGroup::cyclic(ps));
  }
  for (int s = 0; s + 1 < s_max; ++s) tw.maps.push_back(IntMatrix::identity(1));
  if (s_max >= 2) {
    rep.tower_limit = lim_lim1(tw);
  } else {
    rep.tower_limit.lim = InvariantFactors{mpz_class(p)};
    rep.tower_limit.lim1 = {};
    rep.tower_limit.mittag_leffler = true;
  }
  bool lim_ok = rep.tower_limit.lim == InvariantFactors{ps} && rep.tower_limit.lim1.empty() &&
                rep.tower_limit.mittag_leffler;
  rep.checks.push_back({"tower_limit_is_Z_p_at_precision", lim_ok, factors_str(rep.tower_limit.lim)});

  rep.lines.push_back("degree 0: Z_p to precision " + std::to_string(s_max));
  rep.lines.push_back("degree 1: not derived by this algebraic model (spectrum-level input; not computed here)");
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-stage completed direct sums.
// ---------------------------------------------------------------------------

struct CompletedSum {
  CompletionParams params;
  std::vector<long> input_ranks;  // per degree, for a single component
  ProGradedModule module;         // scaled by the number of components ell^K
};

/// The finite-stage model of the completed direct sum: at order bound K the
/// sum acquires ell^K components, each contributing the given ranks; level n
/// is the free Z/ell^n-module on that basis and transitions are reductions.
inline CompletedSum completed_sum(const std::vector<long>& ranks_per_degree, const CompletionParams& params) {
  params.validate();
  CompletedSum cs;
  cs.params = params;
  cs.input_ranks = ranks_per_degree;
  cs.module.params = params;
  long q = 1;
  for (int i = 0; i < params.order_bound_exp; ++i) q *= params.ell;
  for (size_t d = 0; d < ranks_per_degree.size(); ++d)
    if (ranks_per_degree[d] != 0) cs.module.rank_by_degree[int(d)] = ranks_per_degree[d] * q;
  return cs;
}

}  // namespace heisring
