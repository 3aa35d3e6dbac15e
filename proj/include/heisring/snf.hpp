#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace heisring {

/// Dense matrix with arbitrary-precision integer entries.
class IntMatrix {
public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, mpz_class(0)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative dimension");
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  mpz_class& at(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const mpz_class& at(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const mpz_class& a = at(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const mpz_class& b = o.at(k, j);
          if (b != 0) r.at(i, j) += a * b;
        }
      }
    return r;
  }

  IntMatrix transpose() const {
    IntMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  /// columns [from, to) as a new matrix
  IntMatrix columns(int from, int to) const {
    IntMatrix r(rows_, to - from);
    for (int i = 0; i < rows_; ++i)
      for (int j = from; j < to; ++j) r.at(i, j - from) = at(i, j);
    return r;
  }

  /// horizontal concatenation [A | B]
  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("IntMatrix::hcat: row mismatch");
    IntMatrix r(a.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
      for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
  }

  /// determinant by fraction-free (Bareiss) elimination; square matrices only
  mpz_class det() const {
    if (rows_ != cols_) throw std::invalid_argument("IntMatrix::det: not square");
    int n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;
    mpz_class prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (a.at(k, k) == 0) {
        int p = -1;
        for (int i = k + 1; i < n; ++i)
          if (a.at(i, k) != 0) { p = i; break; }
        if (p < 0) return 0;
        for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) {
          mpz_class v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
          mpz_class q = v / prev;
          assert(q * prev == v);
          a.at(i, j) = q;
        }
      prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : mpz_class(-a.at(n - 1, n - 1));
  }

private:
  int rows_, cols_;
  std::vector<mpz_class> data_;
};

/// U * A * V = D with U, V unimodular and the diagonal of D a divisibility
/// chain d1 | d2 | ... (nonnegative).  Uinv and Vinv are maintained
/// alongside so lattice computations never need a matrix inversion.
struct SmithForm {
  IntMatrix d, u, v, uinv, vinv;
  int rank = 0;
  std::vector<mpz_class> diagonal() const {
    std::vector<mpz_class> out;
    int n = std::min(d.rows(), d.cols());
    for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
    return out;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm f;
  f.d = a;
  f.u = IntMatrix::identity(a.rows());
  f.uinv = IntMatrix::identity(a.rows());
  f.v = IntMatrix::identity(a.cols());
  f.vinv = IntMatrix::identity(a.cols());
  IntMatrix& d = f.d;
  const int rows = a.rows(), cols = a.cols();

  auto row_add = [&](int dst, int src, const mpz_class& c) {  // row dst += c * row src
    for (int j = 0; j < cols; ++j)
      if (d.at(src, j) != 0) d.at(dst, j) += c * d.at(src, j);
    for (int j = 0; j < rows; ++j)
      if (f.u.at(src, j) != 0) f.u.at(dst, j) += c * f.u.at(src, j);
    for (int i = 0; i < rows; ++i)
      if (f.uinv.at(i, dst) != 0) f.uinv.at(i, src) -= c * f.uinv.at(i, dst);
  };
  auto col_add = [&](int dst, int src, const mpz_class& c) {
    for (int i = 0; i < rows; ++i)
      if (d.at(i, src) != 0) d.at(i, dst) += c * d.at(i, src);
    for (int i = 0; i < cols; ++i)
      if (f.v.at(i, src) != 0) f.v.at(i, dst) += c * f.v.at(i, src);
    for (int j = 0; j < cols; ++j)
      if (f.vinv.at(dst, j) != 0) f.vinv.at(src, j) -= c * f.vinv.at(dst, j);
  };
  auto row_swap = [&](int x, int y) {
    if (x == y) return;
    for (int j = 0; j < cols; ++j) std::swap(d.at(x, j), d.at(y, j));
    for (int j = 0; j < rows; ++j) std::swap(f.u.at(x, j), f.u.at(y, j));
    for (int i = 0; i < rows; ++i) std::swap(f.uinv.at(i, x), f.uinv.at(i, y));
  };
  auto col_swap = [&](int x, int y) {
    if (x == y) return;
    for (int i = 0; i < rows; ++i) std::swap(d.at(i, x), d.at(i, y));
    for (int i = 0; i < cols; ++i) std::swap(f.v.at(i, x), f.v.at(i, y));
    for (int j = 0; j < cols; ++j) std::swap(f.vinv.at(x, j), f.vinv.at(y, j));
  };
  auto row_negate = [&](int x) {
    for (int j = 0; j < cols; ++j) d.at(x, j) = -d.at(x, j);
    for (int j = 0; j < rows; ++j) f.u.at(x, j) = -f.u.at(x, j);
    for (int i = 0; i < rows; ++i) f.uinv.at(i, x) = -f.uinv.at(i, x);
  };

  int t = 0;
  const int n = std::min(rows, cols);
  while (t < n) {
    // locate an entry of minimal nonzero absolute value in the submatrix
    int pi = -1, pj = -1;
    mpz_class best;
    for (int i = t; i < rows && !(pi >= 0 && best == 1); ++i)
      for (int j = t; j < cols; ++j) {
        if (d.at(i, j) == 0) continue;
        mpz_class v = abs(d.at(i, j));
        if (pi < 0 || v < best) {
          best = v;
          pi = i;
          pj = j;
          if (best == 1) break;  // cannot do better than a unit pivot
        }
      }
    if (pi < 0) break;  // submatrix is zero
    row_swap(t, pi);
    col_swap(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (d.at(i, t) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
        row_add(i, t, -q);
        if (d.at(i, t) != 0) {  // remainder becomes the smaller pivot
          row_swap(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (d.at(t, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
        col_add(j, t, -q);
        if (d.at(t, j) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
    }
    if (d.at(t, t) < 0) row_negate(t);

    // enforce that the pivot divides every remaining entry
    bool divides_all = true;
    if (d.at(t, t) != 1) {
      for (int i = t + 1; i < rows && divides_all; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            row_add(t, i, 1);
            divides_all = false;
            break;
          }
    }
    if (divides_all) ++t;
  }
  f.rank = 0;
  for (int i = 0; i < n; ++i)
    if (d.at(i, i) != 0) ++f.rank;
  return f;
}

/// Invariant factors of a finitely generated abelian group: entries > 1 in
/// a divisibility chain, followed by one 0 per free summand.
using InvariantFactors = std::vector<mpz_class>;

inline std::string factors_str(const InvariantFactors& f) {
  if (f.empty()) return "0";  // trivial group
  std::string s;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) s += " + ";
    s += (f[i] == 0) ? "Z" : "Z/" + f[i].get_str();
  }
  return s;
}

/// The group Z^n / colspan(rel).
inline InvariantFactors quotient_group(int ambient_rank, const IntMatrix& rel) {
  if (rel.rows() != ambient_rank) throw std::invalid_argument("quotient_group: relation matrix has wrong height");
  SmithForm f = smith_normal_form(rel);
  InvariantFactors out;
  for (const auto& di : f.diagonal())
    if (di > 1) out.push_back(di);
  for (int i = f.rank; i < ambient_rank; ++i) out.push_back(0);
  return out;
}

/// Basis matrix of the kernel lattice {x : Mx = 0}.
inline IntMatrix kernel_lattice(const IntMatrix& m) {
  SmithForm f = smith_normal_form(m);
  return f.v.columns(f.rank, f.v.cols());
}

namespace detail {
// Coordinates of the columns of g in the Smith basis of the lattice with
// Smith form f: the basis vectors are b_i = d_i * (Uinv e_i), i < rank, and
// on success g = basis * C.  Returns false if a column escapes the lattice.
inline bool lattice_coordinates(const SmithForm& f, const IntMatrix& g, IntMatrix* out) {
  IntMatrix y = f.u * g;
  IntMatrix c(f.rank, g.cols());
  for (int j = 0; j < g.cols(); ++j) {
    for (int i = 0; i < y.rows(); ++i) {
      if (i < f.rank) {
        mpz_class q = y.at(i, j) / f.d.at(i, i);
        if (q * f.d.at(i, i) != y.at(i, j)) return false;
        c.at(i, j) = q;
      } else if (y.at(i, j) != 0) {
        return false;
      }
    }
  }
  if (out) *out = std::move(c);
  return true;
}
}  // namespace detail

/// Invariant factors of colspan(outer)/colspan(inner) for nested lattices
/// inner <= outer in the same ambient Z^m.
inline InvariantFactors lattice_pair_group(const IntMatrix& outer, const IntMatrix& inner) {
  if (outer.rows() != inner.rows()) throw std::invalid_argument("lattice_pair_group: ambient mismatch");
  SmithForm f = smith_normal_form(outer);
  IntMatrix c;
  if (!detail::lattice_coordinates(f, inner, &c))
    throw std::runtime_error("lattice_pair_group: inner lattice not contained in outer");
  return quotient_group(f.rank, c);
}

/// true iff every column of v lies in the lattice with Smith form f
inline bool lattice_contains(const SmithForm& f, const IntMatrix& v) {
  return detail::lattice_coordinates(f, v, nullptr);
}

/// Invariant factors of the subgroup of Z^n/colspan(rel) generated by the
/// columns of gens, computed in the Smith presentation of the quotient so
/// only the nontrivial cyclic factors enter the arithmetic.
inline InvariantFactors subgroup_factors(const SmithForm& rel_form, int ambient_rank, const IntMatrix& gens) {
  IntMatrix y = rel_form.u * gens;
  std::vector<int> keep;  // coordinates with a nontrivial factor (or free)
  for (int i = 0; i < ambient_rank; ++i)
    if (i >= rel_form.rank || rel_form.d.at(i, i) != 1) keep.push_back(i);

  const int k = int(keep.size());
  IntMatrix coords(k, gens.cols());
  IntMatrix diag_rel(k, k);
  int diag_cols = 0;
  for (int r = 0; r < k; ++r) {
    for (int j = 0; j < gens.cols(); ++j) coords.at(r, j) = y.at(keep[size_t(r)], j);
    if (keep[size_t(r)] < rel_form.rank) {
      diag_rel.at(r, diag_cols) = rel_form.d.at(keep[size_t(r)], keep[size_t(r)]);
      ++diag_cols;
    }
  }
  IntMatrix diag = diag_rel.columns(0, diag_cols);
  return lattice_pair_group(IntMatrix::hcat(coords, diag), diag);
}

/// Order of the class of v in Z^n/colspan(rel): 0 means infinite order.
inline mpz_class order_in_quotient(const SmithForm& f, const IntMatrix& v) {
  IntMatrix y = f.u * v;
  mpz_class q(1);
  for (int i = 0; i < y.rows(); ++i) {
    if (i < f.rank) {
      mpz_class d = f.d.at(i, i);
      mpz_class g = gcd(d, y.at(i, 0));
      q = lcm(q, mpz_class(d / g));
    } else if (y.at(i, 0) != 0) {
      return 0;
    }
  }
  return q;
}

inline mpz_class order_in_quotient(const IntMatrix& rel, const IntMatrix& v) {
  return order_in_quotient(smith_normal_form(rel), v);
}

}  // namespace heisring
