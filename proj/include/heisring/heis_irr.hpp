#pragma once

#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "heisring/cyclo.hpp"

namespace heisring {

// ---------------------------------------------------------------------------
// Irreducible classes of the integral Heisenberg group
//   H = <x, y, z | [x,z] = [y,z] = 1, [x,y] = z>.
// A class of dimension r = |zeta| is determined by the scalars through which
// x^r, y^r and z act; for a representative triple (alpha, beta, zeta) these
// are (alpha^r, beta^r, zeta), so two triples name the same class exactly
// when those keys agree.
// ---------------------------------------------------------------------------

struct IrrTriple {
  RootOfUnity alpha, beta, zeta;

  IrrTriple() = default;
  IrrTriple(RootOfUnity a, RootOfUnity b, RootOfUnity z) : alpha(a), beta(b), zeta(z) {}

  long dim() const { return zeta.order(); }

  /// complete isomorphism invariant (alpha^r, beta^r, zeta), r = |zeta|
  std::array<RootOfUnity, 3> key() const {
    long r = dim();
    return {alpha.pow(r), beta.pow(r), zeta};
  }

  bool operator==(const IrrTriple& o) const { return key() == o.key(); }
  auto operator<=>(const IrrTriple& o) const { return key() <=> o.key(); }
};

/// Canonical representative of the class: both character exponents reduced
/// into [0, 1/r).  Idempotent, constant on classes, preserves zeta.
inline IrrTriple canonical_form(const IrrTriple& t) {
  long r = t.dim();
  auto reduce = [r](const RootOfUnity& x) {
    RootOfUnity xr = x.pow(r);  // exponent of the key value, in [0,1)
    return RootOfUnity(xr.num(), xr.den() * r);
  };
  return IrrTriple(reduce(t.alpha), reduce(t.beta), t.zeta);
}

/// Canonical representative (chi1^r, chi2^r) of the I_zeta-coset of a
/// character pair, r = |zeta|; constant on I_zeta-orbits.
inline std::pair<RootOfUnity, RootOfUnity> canonicalize_character(const std::pair<RootOfUnity, RootOfUnity>& chi,
                                                                  const RootOfUnity& zeta) {
  long r = zeta.order();
  return {chi.first.pow(r), chi.second.pow(r)};
}

// ---------------------------------------------------------------------------
// RepSum: finite multisets of classes with positive multiplicities, the free
// abelian monoid on the irreducibles.
// ---------------------------------------------------------------------------

class RepSum {
public:
  using Terms = std::map<IrrTriple, mpz_class>;

  RepSum() = default;

  void add(const IrrTriple& t, const mpz_class& mult = 1) {
    if (mult == 0) return;
    IrrTriple c = canonical_form(t);
    auto [it, fresh] = terms_.emplace(c, mult);
    if (!fresh) it->second += mult;
    if (it->second < 0) throw std::logic_error("RepSum: negative multiplicity");
    if (it->second == 0) terms_.erase(it);
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  mpz_class total_dim() const {
    mpz_class d(0);
    for (const auto& [t, m] : terms_) d += m * t.dim();
    return d;
  }

  mpz_class multiplicity(const IrrTriple& t) const {
    auto it = terms_.find(canonical_form(t));
    return it == terms_.end() ? mpz_class(0) : it->second;
  }

  bool operator==(const RepSum& o) const { return terms_ == o.terms_; }

private:
  Terms terms_;
};

// ---------------------------------------------------------------------------
// The tensor rule.
// ---------------------------------------------------------------------------

/// Data of the pair (zeta, zeta'): orders r, s, the order t of the product,
/// d = lcm(r,s)/t, and a generator eta of <zeta, zeta'> of order d*t with
/// eta^d = zeta*zeta'.
struct TensorCaseData {
  long r, s, t, d;
  RootOfUnity eta;

  static TensorCaseData of(const RootOfUnity& z1, const RootOfUnity& z2) {
    TensorCaseData c;
    c.r = z1.order();
    c.s = z2.order();
    RootOfUnity prod = z1 * z2;
    c.t = prod.order();
    long L = std::lcm(c.r, c.s);
    c.d = L / c.t;
    // eta = m/L with m = prod.num mod t and gcd(m, L) = 1; some residue in
    // the congruence class is a unit mod L because gcd(prod.num, t) = 1
    long m = -1;
    for (long j = 0; j < c.d; ++j) {
      long cand = prod.num() + j * c.t;
      if (std::gcd(cand, L) == 1) { m = cand % L; break; }
    }
    if (m < 0) throw std::logic_error("TensorCaseData: no primitive generator found");
    c.eta = RootOfUnity(m, L);
    if (c.eta.order() != L || !(c.eta.pow(c.d) == prod))
      throw std::logic_error("TensorCaseData: generator certificate failed");
    return c;
  }
};

/// Tensor product of two irreducible classes, decomposed into irreducibles:
/// the base case (1,1,zeta)(X)(1,1,zeta') = (rs/td^2) sum_{i,j=1}^d
/// (eta^i, eta^j, zeta zeta'), translated by the character part of the
/// inputs.  Output is canonical and the dimensions add up to r*s.
inline RepSum tensor_irr(const IrrTriple& a, const IrrTriple& b) {
  TensorCaseData cd = TensorCaseData::of(a.zeta, b.zeta);
  mpz_class dims = mpz_class(cd.r) * cd.s;
  mpz_class denom = mpz_class(cd.t) * cd.d * cd.d;
  mpz_class mult = dims / denom;
  if (mult * denom != dims) throw std::logic_error("tensor_irr: non-integral class multiplicity");

  // character translations with c1^r = alpha^r etc., i.e. c = key-root^(1/r)
  auto char_root = [](const RootOfUnity& x, long r) {
    RootOfUnity k = x.pow(r);
    return RootOfUnity(k.num(), k.den() * r);
  };
  RootOfUnity c1 = char_root(a.alpha, cd.r) * char_root(b.alpha, cd.s);
  RootOfUnity c2 = char_root(a.beta, cd.r) * char_root(b.beta, cd.s);
  RootOfUnity prod = a.zeta * b.zeta;

  RepSum out;
  for (long i = 1; i <= cd.d; ++i)
    for (long j = 1; j <= cd.d; ++j)
      out.add(IrrTriple(cd.eta.pow(i) * c1, cd.eta.pow(j) * c2, prod), mult);
  if (out.total_dim() != dims) throw std::logic_error("tensor_irr: dimension count failed");
  return out;
}

/// Bilinear extension of tensor_irr to sums.
inline RepSum tensor_rep(const RepSum& u, const RepSum& v) {
  RepSum out;
  for (const auto& [a, ma] : u.terms())
    for (const auto& [b, mb] : v.terms()) {
      RepSum piece = tensor_irr(a, b);
      for (const auto& [t, m] : piece.terms()) out.add(t, m * ma * mb);
    }
  return out;
}

/// Translate every class of a sum by the character (c1, c2).
inline RepSum translate_rep(const RepSum& u, const RootOfUnity& c1, const RootOfUnity& c2) {
  RepSum out;
  for (const auto& [t, m] : u.terms()) out.add(IrrTriple(t.alpha * c1, t.beta * c2, t.zeta), m);
  return out;
}

// ---------------------------------------------------------------------------
// Matrix model and the brute-force character oracle.
// ---------------------------------------------------------------------------

/// Dense matrix over a fixed cyclotomic level.
class CycloMatrix {
public:
  CycloMatrix(int n, long level) : n_(n), level_(level), e_(size_t(n) * n, CycloNumber(level)) {}

  static CycloMatrix identity(int n, long level) {
    CycloMatrix m(n, level);
    for (int i = 0; i < n; ++i) m.at(i, i) = CycloNumber::one(level);
    return m;
  }

  int size() const { return n_; }
  long level() const { return level_; }

  CycloNumber& at(int i, int j) { return e_[size_t(i) * n_ + j]; }
  const CycloNumber& at(int i, int j) const { return e_[size_t(i) * n_ + j]; }

  CycloMatrix operator*(const CycloMatrix& o) const {
    if (n_ != o.n_ || level_ != o.level_) throw std::invalid_argument("CycloMatrix: shape/level mismatch");
    CycloMatrix r(n_, level_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const CycloNumber& a = at(i, k);
        if (a.is_zero()) continue;
        for (int j = 0; j < n_; ++j) {
          const CycloNumber& b = o.at(k, j);
          if (b.is_zero()) continue;
          r.at(i, j) += a * b;
        }
      }
    return r;
  }

  CycloMatrix scaled(const CycloNumber& c) const {
    CycloMatrix r(n_, level_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!at(i, j).is_zero()) r.at(i, j) = at(i, j) * c;
    return r;
  }

  CycloNumber trace() const {
    CycloNumber t(level_);
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }

  static CycloMatrix kron(const CycloMatrix& a, const CycloMatrix& b) {
    if (a.level_ != b.level_) throw std::invalid_argument("CycloMatrix::kron: level mismatch");
    CycloMatrix r(a.n_ * b.n_, a.level_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) {
        if (a.at(i, j).is_zero()) continue;
        for (int k = 0; k < b.n_; ++k)
          for (int l = 0; l < b.n_; ++l) {
            if (b.at(k, l).is_zero()) continue;
            r.at(i * b.n_ + k, j * b.n_ + l) = a.at(i, j) * b.at(k, l);
          }
      }
    return r;
  }

  bool operator==(const CycloMatrix& o) const { return n_ == o.n_ && level_ == o.level_ && e_ == o.e_; }

private:
  int n_;
  long level_;
  std::vector<CycloNumber> e_;
};

struct InducedRep {
  CycloMatrix x, y, z;
  long level;
};

/// Explicit matrices of the class on the induced basis from the subgroup
/// <x^r, y, z>: x is the twisted cyclic shift, y is diagonal, z is scalar.
/// The presentation relations are asserted before returning.
inline InducedRep induced_matrices(const IrrTriple& tr, long level_hint = 1) {
  long r = tr.dim();
  auto k = tr.key();
  const RootOfUnity& upper = k[0];            // scalar of x^r
  RootOfUnity b(k[1].num(), k[1].den() * r);  // r-th root of the y^r scalar
  long level = std::lcm(std::lcm(upper.order(), b.order()), std::lcm(tr.zeta.order(), level_hint));

  CycloMatrix x(int(r), level), y(int(r), level), z(int(r), level);
  for (int i = 0; i + 1 < r; ++i) x.at(i + 1, i) = CycloNumber::one(level);
  x.at(0, int(r) - 1) = CycloNumber::from_root(upper, level);
  for (int i = 0; i < r; ++i) {
    y.at(i, i) = CycloNumber::from_root(b * tr.zeta.pow(-i), level);
    z.at(i, i) = CycloNumber::from_root(tr.zeta, level);
  }

  // mandatory relation check: [x,z] = [y,z] = 1 and [x,y] = z,
  // i.e. xy = (yx) * zeta with z scalar
  CycloNumber zz = CycloNumber::from_root(tr.zeta, level);
  if (!(x * z == z * x) || !(y * z == z * y) || !(x * y == (y * x).scaled(zz)))
    throw std::logic_error("induced_matrices: presentation relations failed");
  return {x, y, z, level};
}

namespace detail {

inline void require_factors_through(const IrrTriple& t, long n, const char* which) {
  long r = t.dim();
  if (n % r != 0)
    throw std::invalid_argument(std::string("decompose_tensor_bruteforce: |zeta| of ") + which +
                                " does not divide N");
  auto k = t.key();
  long cofactor = n / r;
  if (cofactor % k[0].order() != 0 || cofactor % k[1].order() != 0)
    throw std::invalid_argument(std::string("decompose_tensor_bruteforce: ") + which +
                                " does not factor through the level-N Heisenberg group");
}

}  // namespace detail

/// Independent decomposition of a tensor product by summing characters over
/// the finite Heisenberg group H(Z/N) (order N^3) with exact cyclotomic
/// inner products.  Candidates are all (xi1, xi2, zeta zeta') with xi of
/// order dividing N, deduplicated by canonical form; every inner product
/// must come out a non-negative integer and the dimensions must add to r*s.
inline RepSum decompose_tensor_bruteforce(const IrrTriple& a, const IrrTriple& b, long n) {
  if (n < 1) throw std::invalid_argument("decompose_tensor_bruteforce: N must be >= 1");
  detail::require_factors_through(a, n, "left factor");
  detail::require_factors_through(b, n, "right factor");

  // every scalar in sight is an N-th root once the factor-through checks
  // pass, so all arithmetic happens in Q(zeta_N)
  InducedRep va = induced_matrices(a, n);
  InducedRep vb = induced_matrices(b, n);
  if (va.level != n || vb.level != n)
    throw std::logic_error("decompose_tensor_bruteforce: matrix entries escaped level N");

  const RootOfUnity central = a.zeta * b.zeta;

  // tensor-product representation and its character table over H(Z/N);
  // characters of x^i y^j z^k, with the z part a scalar power of the
  // central character
  auto char_table = [n](const CycloMatrix& x, const CycloMatrix& y) {
    std::vector<CycloMatrix> xp, ydiag;
    xp.reserve(n);
    xp.push_back(CycloMatrix::identity(x.size(), x.level()));
    for (long i = 1; i < n; ++i) xp.push_back(xp.back() * x);
    ydiag.reserve(n);
    ydiag.push_back(CycloMatrix::identity(y.size(), y.level()));
    for (long i = 1; i < n; ++i) ydiag.push_back(ydiag.back() * y);
    std::vector<std::vector<CycloNumber>> tr(n, std::vector<CycloNumber>(n, CycloNumber(x.level())));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        CycloNumber acc(x.level());
        for (int kk = 0; kk < x.size(); ++kk) {
          const CycloNumber& xe = xp[i].at(kk, kk);
          const CycloNumber& ye = ydiag[j].at(kk, kk);
          if (!xe.is_zero() && !ye.is_zero()) acc += xe * ye;
        }
        tr[i][j] = acc;
      }
    return tr;
  };

  CycloMatrix xt = CycloMatrix::kron(va.x, vb.x);
  CycloMatrix yt = CycloMatrix::kron(va.y, vb.y);
  auto tr_tensor = char_table(xt, yt);

  std::vector<CycloNumber> zpow, zpow_conj;
  zpow.reserve(n);
  zpow.push_back(CycloNumber::one(n));
  CycloNumber zc = CycloNumber::from_root(central, n);
  for (long c = 1; c < n; ++c) zpow.push_back(zpow.back() * zc);
  zpow_conj.reserve(n);
  for (long c = 0; c < n; ++c) zpow_conj.push_back(zpow[c].conj());

  // candidate classes with central character zeta*zeta'
  std::set<IrrTriple> candidates;
  for (long u = 0; u < n; ++u)
    for (long v = 0; v < n; ++v)
      candidates.insert(canonical_form(IrrTriple(RootOfUnity(u, n), RootOfUnity(v, n), central)));

  mpz_class group_order = mpz_class(n) * n * n;
  RepSum out;
  for (const IrrTriple& cand : candidates) {
    InducedRep w = induced_matrices(cand, n);
    auto tr_cand = char_table(w.x, w.y);
    CycloNumber acc(n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        if (tr_tensor[i][j].is_zero() || tr_cand[i][j].is_zero()) continue;
        CycloNumber left = tr_tensor[i][j];
        CycloNumber right = tr_cand[i][j].conj();
        for (long c = 0; c < n; ++c) acc += left * zpow[c] * right * zpow_conj[c];
      }
    mpq_class val;
    if (!acc.is_rational(&val))
      throw std::runtime_error("decompose_tensor_bruteforce: inner product is not rational");
    val /= group_order;
    val.canonicalize();
    if (val.get_den() != 1 || val < 0)
      throw std::runtime_error("decompose_tensor_bruteforce: inner product " + val.get_str() +
                               " is not a non-negative integer");
    if (val != 0) out.add(cand, mpz_class(val.get_num()));
  }

  mpz_class expect = mpz_class(a.dim()) * b.dim();
  if (out.total_dim() != expect)
    throw std::runtime_error("decompose_tensor_bruteforce: dimensions of constituents do not add up");
  return out;
}

}  // namespace heisring
