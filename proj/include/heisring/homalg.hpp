#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heisring/snf.hpp"

namespace heisring {

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

/// Finitely generated graded abelian group: invariant factors per degree
/// (0 denotes a free summand).
struct GradedAbelianGroup {
  std::map<int, InvariantFactors> by_degree;

  InvariantFactors degree(int n) const {
    auto it = by_degree.find(n);
    return it == by_degree.end() ? InvariantFactors{} : it->second;
  }

  /// dimensions over F_ell, meaningful when every factor is an ell-power
  std::vector<long> mod_ell_dims(int maxdeg) const {
    std::vector<long> out(maxdeg + 1, 0);
    for (int n = 0; n <= maxdeg; ++n) out[n] = long(degree(n).size());
    return out;
  }

  bool operator==(const GradedAbelianGroup& o) const { return by_degree == o.by_degree; }
};

// ---------------------------------------------------------------------------
// Bounded chain complexes of free Z-modules.
// ---------------------------------------------------------------------------

struct ZComplex {
  std::vector<long> ranks;      // ranks[n] = rank of C_n
  std::vector<IntMatrix> diff;  // diff[n] : C_n -> C_{n-1} for n >= 1

  int top() const { return int(ranks.size()) - 1; }

  void validate() const {
    if (diff.size() != ranks.size()) throw std::invalid_argument("ZComplex: differential count mismatch");
    for (size_t n = 1; n < ranks.size(); ++n) {
      if (diff[n].rows() != ranks[n - 1] || diff[n].cols() != ranks[n])
        throw std::invalid_argument("ZComplex: differential shape mismatch at degree " + std::to_string(n));
      if (n >= 2 && !(diff[n - 1] * diff[n]).is_zero())
        throw std::logic_error("ZComplex: d.d != 0 at degree " + std::to_string(n));
    }
  }

  InvariantFactors homology(int n) const {
    if (n < 0 || n > top()) return {};
    IntMatrix kernel = (n == 0) ? IntMatrix::identity(int(ranks[0])) : kernel_lattice(diff[n]);
    IntMatrix image = (n == top()) ? IntMatrix(int(ranks[n]), 0) : diff[n + 1];
    return lattice_pair_group(kernel, image);
  }
};

/// Tensor a free Z-complex with the two-term complex [Z --ell--> Z]
/// resolving F_ell.
inline ZComplex tensor_mod_ell(const ZComplex& c, long ell) {
  ZComplex t;
  int n_top = c.top() + 1;
  t.ranks.resize(n_top + 1);
  t.diff.resize(n_top + 1);
  auto rank_of = [&](int n) { return (n >= 0 && n <= c.top()) ? c.ranks[n] : 0; };
  for (int n = 0; n <= n_top; ++n) t.ranks[n] = rank_of(n) + rank_of(n - 1);
  for (int n = 1; n <= n_top; ++n) {
    IntMatrix d{int(t.ranks[n - 1]), int(t.ranks[n])};
    long r0 = rank_of(n), r1 = rank_of(n - 1), r2 = rank_of(n - 2);
    // block (C_{n-1}, C_n): the differential of C
    if (r0 > 0 && r1 > 0)
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r0; ++j) d.at(i, j) = c.diff[n].at(i, j);
    // block (C_{n-1}, C_{n-1}): +/- ell
    for (int i = 0; i < r1; ++i) d.at(i, int(r0) + i) = (n % 2 == 0) ? -ell : ell;
    // block (C_{n-2}, C_{n-1}): the differential of C, shifted
    if (r1 > 0 && r2 > 0)
      for (int i = 0; i < r2; ++i)
        for (int j = 0; j < r1; ++j) d.at(int(r1) + i, int(r0) + j) = c.diff[n - 1].at(i, j);
    t.diff[n] = std::move(d);
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// The group ring Z[C_m] and complexes of free modules over it.
// ---------------------------------------------------------------------------

struct GroupRingElement {
  long m = 1;
  std::vector<mpz_class> c;  // coefficient of t^i

  explicit GroupRingElement(long order) : m(order), c(order, mpz_class(0)) {
    if (order < 1) throw std::invalid_argument("GroupRingElement: order must be >= 1");
  }

  static GroupRingElement unit(long m) {
    GroupRingElement e(m);
    e.c[0] = 1;
    return e;
  }
  static GroupRingElement generator_minus_one(long m) {
    GroupRingElement e(m);
    e.c[1 % m] += 1;
    e.c[0] -= 1;
    return e;
  }
  /// the norm element 1 + t + ... + t^{m-1}
  static GroupRingElement norm(long m) {
    GroupRingElement e(m);
    for (long i = 0; i < m; ++i) e.c[i] = 1;
    return e;
  }
  static GroupRingElement scalar(long m, const mpz_class& v) {
    GroupRingElement e(m);
    e.c[0] = v;
    return e;
  }

  GroupRingElement operator*(const GroupRingElement& o) const {
    if (m != o.m) throw std::invalid_argument("GroupRingElement: order mismatch");
    GroupRingElement r(m);
    for (long i = 0; i < m; ++i) {
      if (c[i] == 0) continue;
      for (long j = 0; j < m; ++j) {
        if (o.c[j] == 0) continue;
        r.c[(i + j) % m] += c[i] * o.c[j];
      }
    }
    return r;
  }

  GroupRingElement operator+(const GroupRingElement& o) const {
    if (m != o.m) throw std::invalid_argument("GroupRingElement: order mismatch");
    GroupRingElement r(m);
    for (long i = 0; i < m; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }

  bool is_zero() const {
    for (const auto& v : c)
      if (v != 0) return false;
    return true;
  }

  /// augmentation t -> 1
  mpz_class aug() const {
    mpz_class s(0);
    for (const auto& v : c) s += v;
    return s;
  }

  /// the m x m integer matrix of multiplication by this element on Z[C_m]
  IntMatrix to_z_matrix() const {
    IntMatrix a{int(m), int(m)};
    for (long j = 0; j < m; ++j)
      for (long i = 0; i < m; ++i)
        if (c[i] != 0) a.at(int((i + j) % m), int(j)) = c[i];
    return a;
  }
};

/// Bounded complex of finitely generated free Z[C_m]-modules; d.d = 0 is
/// checked over the group ring on construction.
struct CyclicModuleComplex {
  long m = 1;
  std::vector<long> ranks;
  // diff[n] : R^{ranks[n]} -> R^{ranks[n-1]}, entries diff[n][i][j]
  std::vector<std::vector<std::vector<GroupRingElement>>> diff;

  static CyclicModuleComplex free_rank_one(long m) {
    CyclicModuleComplex c;
    c.m = m;
    c.ranks = {1};
    c.diff.resize(1);
    return c;
  }

  void validate() const {
    if (diff.size() != ranks.size()) throw std::invalid_argument("CyclicModuleComplex: differential count mismatch");
    for (size_t n = 1; n < ranks.size(); ++n) {
      const auto& d = diff[n];
      if (long(d.size()) != ranks[n - 1]) throw std::invalid_argument("CyclicModuleComplex: bad row count");
      for (const auto& row : d)
        if (long(row.size()) != ranks[n]) throw std::invalid_argument("CyclicModuleComplex: bad column count");
      if (n >= 2) {
        // (d_{n-1} * d_n) over the group ring must vanish
        for (long i = 0; i < ranks[n - 2]; ++i)
          for (long j = 0; j < ranks[n]; ++j) {
            GroupRingElement acc(m);
            for (long k = 0; k < ranks[n - 1]; ++k) acc = acc + diff[n - 1][i][k] * diff[n][k][j];
            if (!acc.is_zero()) throw std::logic_error("CyclicModuleComplex: d.d != 0");
          }
      }
    }
  }
};

namespace detail {

// Z-matrix of a group-ring matrix (each entry becomes an m x m block)
inline IntMatrix group_ring_block_matrix(const std::vector<std::vector<GroupRingElement>>& a, long m, long rows,
                                         long cols) {
  IntMatrix z{int(rows * m), int(cols * m)};
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      IntMatrix blk = a[i][j].to_z_matrix();
      for (long bi = 0; bi < m; ++bi)
        for (long bj = 0; bj < m; ++bj)
          if (blk.at(int(bi), int(bj)) != 0) z.at(int(i * m + bi), int(j * m + bj)) = blk.at(int(bi), int(bj));
    }
  return z;
}

}  // namespace detail

/// Totalization of (2-periodic resolution of Z over Z[C_m]) tensor_R M as a
/// complex of free Z-modules, for M a complex of free modules.  The
/// horizontal maps alternate multiplication by (t - 1) and by the norm.
inline ZComplex periodic_tensor(const CyclicModuleComplex& mod, int maxdeg) {
  mod.validate();
  const long m = mod.m;
  const int qmax = int(mod.ranks.size()) - 1;
  const int top = maxdeg + 1;

  IntMatrix tm1 = GroupRingElement::generator_minus_one(m).to_z_matrix();
  IntMatrix nrm = GroupRingElement::norm(m).to_z_matrix();

  // vertical differentials of M as Z-matrices
  std::vector<IntMatrix> vert(qmax + 1);
  for (int q = 1; q <= qmax; ++q)
    vert[q] = detail::group_ring_block_matrix(mod.diff[q], m, mod.ranks[q - 1], mod.ranks[q]);

  auto rank_of = [&](int q) { return (q >= 0 && q <= qmax) ? mod.ranks[q] * m : 0; };

  ZComplex c;
  c.ranks.resize(top + 1);
  c.diff.resize(top + 1);
  for (int n = 0; n <= top; ++n) {
    long r = 0;
    for (int p = 0; p <= n; ++p) r += rank_of(n - p);
    c.ranks[n] = r;
  }
  // block offsets: degree n, horizontal index p = 0..n, block size rank_of(n-p)
  auto offset = [&](int n, int p) {
    long off = 0;
    for (int pp = 0; pp < p; ++pp) off += rank_of(n - pp);
    return off;
  };

  for (int n = 1; n <= top; ++n) {
    IntMatrix d{int(c.ranks[n - 1]), int(c.ranks[n])};
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      long rk = rank_of(q);
      if (rk == 0) continue;
      long src = offset(n, p);
      // horizontal component: depends on the parity of p (t-1 for odd p)
      if (p >= 1) {
        const IntMatrix& h = (p % 2 == 1) ? tm1 : nrm;
        long dst = offset(n - 1, p - 1);
        for (long blkk = 0; blkk < rk / m; ++blkk)
          for (long bi = 0; bi < m; ++bi)
            for (long bj = 0; bj < m; ++bj)
              if (h.at(int(bi), int(bj)) != 0)
                d.at(int(dst + blkk * m + bi), int(src + blkk * m + bj)) = h.at(int(bi), int(bj));
      }
      // vertical component with the sign (-1)^p
      if (q >= 1) {
        long dst = offset(n - 1, p);
        const IntMatrix& v = vert[q];
        for (int i = 0; i < v.rows(); ++i)
          for (int j = 0; j < v.cols(); ++j)
            if (v.at(i, j) != 0) d.at(int(dst + i), int(src + j)) = (p % 2 == 0) ? v.at(i, j) : -v.at(i, j);
      }
    }
    c.diff[n] = std::move(d);
  }
  c.validate();
  return c;
}

/// Tor over Z[C_m] of the trivial module (Z, or F_ell when ell is given)
/// against M, computed from the 2-periodic resolution
///   ... -> R --norm--> R --(t-1)--> R -> Z -> 0.
/// F_ell coefficients totalize with the two-term complex [Z --ell--> Z].
inline GradedAbelianGroup tor_cyclic(long m, std::optional<long> ell, const CyclicModuleComplex& mod, int maxdeg) {
  if (m <= 0) throw std::invalid_argument("tor_cyclic: m must be positive");
  if (maxdeg < 0) throw std::invalid_argument("tor_cyclic: maxdeg must be >= 0");
  if (mod.m != m) throw std::invalid_argument("tor_cyclic: module lives over a different group ring");
  ZComplex c = periodic_tensor(mod, ell ? maxdeg + 1 : maxdeg);
  if (ell) {
    if (!is_prime(*ell)) throw std::invalid_argument("tor_cyclic: coefficient modulus must be prime");
    c = tensor_mod_ell(c, *ell);
  }
  GradedAbelianGroup out;
  for (int n = 0; n <= maxdeg; ++n) out.by_degree[n] = c.homology(n);
  return out;
}

/// Same, with M the trivial module Z (t acts as the identity).
inline GradedAbelianGroup tor_cyclic_trivial(long m, std::optional<long> ell, int maxdeg) {
  if (m <= 0) throw std::invalid_argument("tor_cyclic: m must be positive");
  if (maxdeg < 0) throw std::invalid_argument("tor_cyclic: maxdeg must be >= 0");
  // the periodic resolution tensored with trivial Z: alternating 0 and m
  ZComplex c;
  int top = maxdeg + 2;
  c.ranks.assign(top + 1, 1);
  c.diff.resize(top + 1);
  for (int n = 1; n <= top; ++n) {
    IntMatrix d(1, 1);
    d.at(0, 0) = (n % 2 == 1) ? 0 : m;
    c.diff[n] = std::move(d);
  }
  c.validate();
  if (ell) {
    if (!is_prime(*ell)) throw std::invalid_argument("tor_cyclic: coefficient modulus must be prime");
    c = tensor_mod_ell(c, *ell);
  }
  GradedAbelianGroup out;
  for (int n = 0; n <= maxdeg; ++n) out.by_degree[n] = c.homology(n);
  return out;
}

// ---------------------------------------------------------------------------
// Bar-complex Tor for finite-dimensional F_ell-algebras.
// ---------------------------------------------------------------------------

/// A finite-dimensional algebra over F_ell with a distinguished basis,
/// structure constants, unit coordinates and an augmentation functional.
struct FiniteAlgebra {
  long ell = 2;
  int dim = 1;
  // mult[i][j][k] = coefficient of e_k in e_i * e_j, reduced mod ell
  std::vector<std::vector<std::vector<long>>> mult;
  std::vector<long> unit;  // coordinates of 1
  std::vector<long> aug;   // augmentation of each basis element

  static FiniteAlgebra group_algebra_cyclic(long ell, long m) {
    if (!is_prime(ell)) throw std::invalid_argument("FiniteAlgebra: ell must be prime");
    if (m < 1) throw std::invalid_argument("FiniteAlgebra: group order must be >= 1");
    FiniteAlgebra a;
    a.ell = ell;
    a.dim = int(m);
    a.mult.assign(m, std::vector<std::vector<long>>(m, std::vector<long>(m, 0)));
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < m; ++j) a.mult[i][j][(i + j) % m] = 1;
    a.unit.assign(m, 0);
    a.unit[0] = 1;
    a.aug.assign(m, 1);
    return a;
  }

  static FiniteAlgebra base_field(long ell) { return group_algebra_cyclic(ell, 1); }
};

namespace detail {

/// rank of a dense matrix over F_ell (entries already reduced)
inline long modp_rank(std::vector<uint32_t>& a, long rows, long cols, long ell) {
  long rank = 0;
  for (long col = 0; col < cols && rank < rows; ++col) {
    long pivot = -1;
    for (long r = rank; r < rows; ++r)
      if (a[size_t(r) * cols + col] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (long j = col; j < cols; ++j)
        std::swap(a[size_t(pivot) * cols + j], a[size_t(rank) * cols + j]);
    // normalize pivot row
    uint64_t inv = 1, base = a[size_t(rank) * cols + col] % ell, e = ell - 2;
    uint64_t acc = base;
    while (e) {  // modular inverse by Fermat
      if (e & 1) inv = inv * acc % uint64_t(ell);
      acc = acc * acc % uint64_t(ell);
      e >>= 1;
    }
    for (long j = col; j < cols; ++j)
      a[size_t(rank) * cols + j] = uint32_t(uint64_t(a[size_t(rank) * cols + j]) * inv % uint64_t(ell));
    for (long r = rank + 1; r < rows; ++r) {
      uint64_t f = a[size_t(r) * cols + col];
      if (f == 0) continue;
      for (long j = col; j < cols; ++j) {
        uint64_t v = a[size_t(r) * cols + j] + (uint64_t(ell) - f) * a[size_t(rank) * cols + j] % uint64_t(ell);
        a[size_t(r) * cols + j] = uint32_t(v % uint64_t(ell));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

constexpr long kBarWorkBound = 8000;  // largest bar stage dimension built

/// Dimensions of Tor^A_*(F_ell, F_ell) for * = 0..maxdeg, computed as the
/// homology of the (unnormalized) bar complex with stages A^{(x)p}.  Guarded:
/// dim(A) <= 6, maxdeg <= 6, and dim^(maxdeg+1) <= kBarWorkBound.
inline std::vector<long> bar_tor(const FiniteAlgebra& a, int maxdeg) {
  if (a.dim > 6 || maxdeg > 6) throw std::invalid_argument("bar_tor: beyond desk scale (dim <= 6, maxdeg <= 6)");
  if (maxdeg < 0) throw std::invalid_argument("bar_tor: maxdeg must be >= 0");
  double stages = 1;
  for (int i = 0; i <= maxdeg; ++i) stages *= a.dim;
  if (stages > double(kBarWorkBound))
    throw std::invalid_argument("bar_tor: resource guard: dim^(maxdeg+1) exceeds " + std::to_string(kBarWorkBound));

  const long ell = a.ell, n = a.dim;
  auto stage_dim = [&](int p) {
    long d = 1;
    for (int i = 0; i < p; ++i) d *= n;
    return d;
  };

  // differential d_p : A^{(x)p} -> A^{(x)p-1} as a dense mod-ell matrix
  auto build_diff = [&](int p) {
    long rows = stage_dim(p - 1), cols = stage_dim(p);
    std::vector<uint32_t> d(size_t(rows) * cols, 0);
    std::vector<long> digits(p);
    auto add_entry = [&](long row, long col, long val) {
      long v = ((val % ell) + ell) % ell;
      if (v == 0) return;
      size_t at = size_t(row) * cols + col;
      d[at] = uint32_t((d[at] + v) % ell);
    };
    for (long col = 0; col < cols; ++col) {
      long rest = col;
      for (int k = 0; k < p; ++k) {
        digits[k] = rest % n;
        rest /= n;
      }
      // face 0: augment the first factor
      {
        long row = 0;
        for (int k = 1; k < p; ++k) row += digits[k] * stage_dim(k - 1);
        add_entry(row, col, a.aug[digits[0]]);
      }
      // inner faces: merge adjacent factors
      for (int f = 1; f < p; ++f) {
        const auto& prod = a.mult[digits[f - 1]][digits[f]];
        for (long target = 0; target < n; ++target) {
          if (prod[target] == 0) continue;
          long row = 0, place = 0;
          for (int k = 0; k < p; ++k) {
            if (k == f) continue;  // slots f-1 and f merge into one
            long digit = (k == f - 1) ? target : digits[k];
            row += digit * stage_dim(place);
            ++place;
          }
          add_entry(row, col, (f % 2 == 0) ? prod[target] : -prod[target]);
        }
      }
      // last face: augment the final factor
      {
        long row = 0;
        for (int k = 0; k + 1 < p; ++k) row += digits[k] * stage_dim(k);
        add_entry(row, col, (p % 2 == 0) ? a.aug[digits[p - 1]] : -a.aug[digits[p - 1]]);
      }
    }
    return d;
  };

  std::vector<long> rank_d(maxdeg + 2, 0);  // rank of d_p
  for (int p = 1; p <= maxdeg + 1; ++p) {
    auto d = build_diff(p);
    rank_d[p] = detail::modp_rank(d, stage_dim(p - 1), stage_dim(p), ell);
  }
  std::vector<long> dims(maxdeg + 1);
  for (int p = 0; p <= maxdeg; ++p) dims[p] = stage_dim(p) - rank_d[p] - rank_d[p + 1];
  return dims;
}

// ---------------------------------------------------------------------------
// The colimit over m of the circle's two-term complexes with F_ell
// coefficients.
// ---------------------------------------------------------------------------

struct CircleColimitResult {
  std::vector<long> chain;                 // the m_i
  std::vector<long> transition_indices;    // d_i with m_{i+1} = d_i m_i
  std::vector<long> transition_deg1;       // d_i mod ell (action on degree 1)
  std::array<long, 2> stage_dims{1, 1};    // per-stage dimensions
  std::array<long, 2> colimit_dims{1, 1};  // surviving dimensions
};

/// Each stage m contributes [Z[mu_m] --(zeta_m - 1)--> Z[mu_m]] (x)_{Z[mu_m]}
/// F_ell, which has zero differential and dimensions (1,1).  The transition
/// to level d*m is the identity in degree 0 and multiplication by the
/// augmentation of zeta_{dm} + ... + zeta_{dm}^d, i.e. by d, in degree 1;
/// the degree-1 class survives the colimit iff no transition index vanishes
/// mod ell.
inline CircleColimitResult circle_colimit(long ell, const std::vector<long>& chain) {
  if (!is_prime(ell)) throw std::invalid_argument("circle_colimit: ell must be prime");
  if (chain.empty()) throw std::invalid_argument("circle_colimit: chain must be nonempty");
  CircleColimitResult res;
  res.chain = chain;
  for (size_t i = 0; i < chain.size(); ++i) {
    long m = chain[i];
    if (m < 1) throw std::invalid_argument("circle_colimit: stages must be >= 1");
    // the differential after tensoring down to F_ell is aug(zeta_m - 1) = 0
    mpz_class dstage = GroupRingElement::generator_minus_one(m).aug();
    if (dstage % ell != 0) throw std::logic_error("circle_colimit: stage differential did not vanish");
    if (i + 1 < chain.size()) {
      if (chain[i + 1] % m != 0) throw std::invalid_argument("circle_colimit: chain is not divisible");
      long d = chain[i + 1] / m;
      res.transition_indices.push_back(d);
      // transition in degree 1: augmentation of sum_{k=1}^{d} t^k in Z[mu_{dm}]
      GroupRingElement tr(chain[i + 1]);
      for (long k = 1; k <= d; ++k) tr.c[k % chain[i + 1]] += 1;
      mpz_class am = tr.aug() % ell;
      res.transition_deg1.push_back(am.get_si());
    }
  }
  long composite = 1;
  for (long d1 : res.transition_deg1) composite = (composite * d1) % ell;
  res.colimit_dims = {1, composite % ell != 0 ? 1L : 0L};
  return res;
}

// ---------------------------------------------------------------------------
// Ideal-power quotients R_k/I^s for R_k = Z[C_{p^k}], I = (p, t-1), and
// their colimit over k under t -> u^p.
// ---------------------------------------------------------------------------

struct IdealPowerLevel {
  int k = 1;
  long rank = 1;                  // p^k
  InvariantFactors factors;       // R_k/I^s as an abelian group
  mpz_class order_of_one;         // order of the class of 1 (augmentation image)
};

struct IdealPowerResult {
  long p = 2;
  int s = 1;
  std::vector<IdealPowerLevel> levels;
  // invariant factors of the image of the starting level in level k+j,
  // j = 1, 2, ...; a decreasing chain of finite groups
  std::vector<InvariantFactors> image_factors;
  bool stabilized = false;
  // true when the image equals the cyclic subgroup generated by the class
  // of 1; that subgroup maps isomorphically up the whole tower, so the
  // chain can never shrink below it and the value is pinned
  bool certified = false;
  InvariantFactors colimit;  // stabilized invariant factors, when stabilized
};

namespace detail {

inline long power_long(long base, int e) {
  long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// relation matrix of I^s inside Z[C_n]: columns p^{s-j} (t-1)^j t^i
inline IntMatrix ideal_power_relations(long p, long n, int s) {
  std::vector<GroupRingElement> powers;  // (t-1)^j
  powers.push_back(GroupRingElement::unit(n));
  for (int j = 1; j <= s; ++j) powers.push_back(powers.back() * GroupRingElement::generator_minus_one(n));

  IntMatrix rel{int(n), int((s + 1) * n)};
  int col = 0;
  for (int j = 0; j <= s; ++j) {
    mpz_class scale(1);
    for (int q = 0; q < s - j; ++q) scale *= p;
    for (long i = 0; i < n; ++i, ++col)
      for (long row = 0; row < n; ++row) {
        const mpz_class& cc = powers[j].c[((row - i) % n + n) % n];
        if (cc != 0) rel.at(int(row), col) = cc * scale;
      }
  }
  return rel;
}

}  // namespace detail

/// Present R_k/I^s, optionally following the tower k, k+1, ... under
/// t -> u^p.  The colimit is detected through the images of the starting
/// level further up the tower: the chain of images is decreasing, the class
/// of 1 survives with order p^s at every level, so as soon as the image is
/// exactly the cyclic group generated by 1 the value is certified final.
/// Failing the certificate, `window` consecutive equal image factors are
/// accepted; running out of levels is an error, never a silent truncation.
inline IdealPowerResult ideal_power_quotient(long p, int k, int s, bool with_colimit, int window = 4,
                                             int max_levels = 8) {
  if (!is_prime(p)) throw std::invalid_argument("ideal_power_quotient: p must be prime");
  if (k < 1 || s < 1) throw std::invalid_argument("ideal_power_quotient: k and s must be >= 1");

  IdealPowerResult res;
  res.p = p;
  res.s = s;

  struct LevelForms {
    IdealPowerLevel lv;
    SmithForm rel_form;
  };
  auto level_data = [&](int kk) {
    LevelForms out;
    out.lv.k = kk;
    out.lv.rank = detail::power_long(p, kk);
    if (out.lv.rank > 1024) throw std::invalid_argument("ideal_power_quotient: p^k beyond desk scale");
    IntMatrix rel = detail::ideal_power_relations(p, out.lv.rank, s);
    out.rel_form = smith_normal_form(rel);
    InvariantFactors fs;
    for (const auto& di : out.rel_form.diagonal())
      if (di > 1) fs.push_back(di);
    for (int i = out.rel_form.rank; i < int(out.lv.rank); ++i) fs.push_back(0);
    out.lv.factors = fs;
    IntMatrix e0(int(out.lv.rank), 1);
    e0.at(0, 0) = 1;
    out.lv.order_of_one = order_in_quotient(out.rel_form, e0);
    return out;
  };

  LevelForms base = level_data(k);
  res.levels.push_back(base.lv);
  if (!with_colimit) return res;

  mpz_class ps(1);
  for (int i = 0; i < s; ++i) ps *= p;
  InvariantFactors cyclic_of_one{ps};

  const long n0 = base.lv.rank;
  for (int j = 1; j <= max_levels; ++j) {
    LevelForms upper = level_data(k + j);
    res.levels.push_back(upper.lv);
    // composite transition t^i -> t^{p^j i}
    long scale = detail::power_long(p, j);
    IntMatrix tr{int(upper.lv.rank), int(n0)};
    for (long i = 0; i < n0; ++i) tr.at(int(scale * i), int(i)) = 1;
    InvariantFactors image = subgroup_factors(upper.rel_form, int(upper.lv.rank), tr);
    res.image_factors.push_back(image);

    if (image == cyclic_of_one && upper.lv.order_of_one == ps) {
      res.stabilized = true;
      res.certified = true;
      res.colimit = image;
      return res;
    }
    if (int(res.image_factors.size()) >= window) {
      bool all_equal = true;
      for (int w = 1; w < window; ++w)
        if (!(res.image_factors[res.image_factors.size() - 1 - w] == image)) all_equal = false;
      if (all_equal) {
        res.stabilized = true;
        res.colimit = image;
        return res;
      }
    }
  }
  throw std::runtime_error("ideal_power_quotient: colimit did not stabilize within the level budget");
}

// ---------------------------------------------------------------------------
// Finite windows of towers of finitely generated abelian groups.
// ---------------------------------------------------------------------------

/// A group presented as Z^rank / colspan(rel).
struct PresentedGroup {
  int rank = 0;
  IntMatrix rel;

  static PresentedGroup cyclic(const mpz_class& n) {
    PresentedGroup g;
    g.rank = 1;
    g.rel = IntMatrix(1, 1);
    g.rel.at(0, 0) = n;
    return g;
  }

  static PresentedGroup from_factors(const InvariantFactors& f) {
    PresentedGroup g;
    g.rank = int(f.size());
    g.rel = IntMatrix(g.rank, g.rank);
    for (int i = 0; i < g.rank; ++i) g.rel.at(i, i) = f[size_t(i)];
    return g;
  }

  InvariantFactors factors() const { return quotient_group(rank, rel); }
};

/// Window of an inverse system A_1 <- A_2 <- ... <- A_w; maps[i] is the
/// ambient matrix carrying A_{i+1} into A_i.
struct TowerWindow {
  std::vector<PresentedGroup> groups;
  std::vector<IntMatrix> maps;

  void validate() const {
    if (groups.size() < 2) throw std::invalid_argument("TowerWindow: window length must be >= 2");
    if (maps.size() + 1 != groups.size()) throw std::invalid_argument("TowerWindow: map count mismatch");
    for (size_t i = 0; i < maps.size(); ++i) {
      if (maps[i].rows() != groups[i].rank || maps[i].cols() != groups[i + 1].rank)
        throw std::invalid_argument("TowerWindow: map shape mismatch");
      // maps must send relations into relations
      SmithForm f = smith_normal_form(groups[i].rel);
      if (!lattice_contains(f, maps[i] * groups[i + 1].rel))
        throw std::invalid_argument("TowerWindow: transition does not respect presentations");
    }
  }
};

struct LimResult {
  InvariantFactors lim;
  InvariantFactors lim1;
  bool mittag_leffler = false;  // all window transitions surjective
};

/// lim and lim^1 over the window: kernel and cokernel of the shifted
/// difference map prod A_i -> prod A_i (one slot shorter).
inline LimResult lim_lim1(const TowerWindow& tower) {
  tower.validate();
  const auto& gs = tower.groups;
  const size_t w = gs.size();

  long dom_rank = 0, cod_rank = 0;
  for (const auto& g : gs) dom_rank += g.rank;
  for (size_t i = 0; i + 1 < w; ++i) cod_rank += gs[i].rank;

  // ambient matrix of Phi(a_1, ..., a_w) = (a_i - f_i(a_{i+1}))_i
  IntMatrix phi{int(cod_rank), int(dom_rank)};
  long row = 0, col_base = 0;
  std::vector<long> col_offsets(w, 0);
  for (size_t i = 0; i < w; ++i) {
    col_offsets[i] = col_base;
    col_base += gs[i].rank;
  }
  for (size_t i = 0; i + 1 < w; ++i) {
    for (int r = 0; r < gs[i].rank; ++r) phi.at(int(row + r), int(col_offsets[i] + r)) = 1;
    const IntMatrix& f = tower.maps[i];
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c)
        if (f.at(r, c) != 0) phi.at(int(row + r), int(col_offsets[i + 1] + c)) = -f.at(r, c);
    row += gs[i].rank;
  }

  // relation matrices of the product groups
  auto product_rel = [](const std::vector<PresentedGroup>& groups, size_t count) {
    long rank = 0, cols = 0;
    for (size_t i = 0; i < count; ++i) {
      rank += groups[i].rank;
      cols += groups[i].rel.cols();
    }
    IntMatrix rel{int(rank), int(cols)};
    long ro = 0, co = 0;
    for (size_t i = 0; i < count; ++i) {
      for (int r = 0; r < groups[i].rel.rows(); ++r)
        for (int c = 0; c < groups[i].rel.cols(); ++c)
          if (groups[i].rel.at(r, c) != 0) rel.at(int(ro + r), int(co + c)) = groups[i].rel.at(r, c);
      ro += groups[i].rank;
      co += groups[i].rel.cols();
    }
    return rel;
  };

  IntMatrix dom_rel = product_rel(gs, w);
  IntMatrix cod_rel = product_rel(gs, w - 1);

  // lim = ker Phi: preimage of the codomain relations, modulo domain relations
  IntMatrix stacked = IntMatrix::hcat(phi, cod_rel);
  IntMatrix ker = kernel_lattice(stacked);
  IntMatrix preimage(int(dom_rank), ker.cols());
  for (int i = 0; i < int(dom_rank); ++i)
    for (int j = 0; j < ker.cols(); ++j) preimage.at(i, j) = ker.at(i, j);
  LimResult out;
  out.lim = lattice_pair_group(IntMatrix::hcat(preimage, dom_rel), dom_rel);

  // lim^1 = coker Phi
  out.lim1 = quotient_group(int(cod_rank), IntMatrix::hcat(phi, cod_rel));

  // Mittag-Leffler: every transition surjective
  out.mittag_leffler = true;
  for (size_t i = 0; i + 1 < w; ++i) {
    InvariantFactors coker = quotient_group(gs[i].rank, IntMatrix::hcat(tower.maps[i], gs[i].rel));
    if (!coker.empty()) out.mittag_leffler = false;
  }
  return out;
}

}  // namespace heisring
