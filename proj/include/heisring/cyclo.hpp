#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace heisring {

/// A torsion point of the circle, stored as the exponent num/den of
/// e^{2*pi*i*num/den} in lowest terms with 0 <= num < den.  The trivial
/// root 1 is (0, 1).  Order of the root equals den.
class RootOfUnity {
public:
  RootOfUnity() : num_(0), den_(1) {}

  RootOfUnity(long num, long den) {
    if (den <= 0) throw std::invalid_argument("RootOfUnity: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    long g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  long num() const { return num_; }
  long den() const { return den_; }
  long order() const { return den_; }
  bool is_one() const { return num_ == 0; }

  RootOfUnity operator*(const RootOfUnity& o) const {
    long d = std::lcm(den_, o.den_);
    return RootOfUnity(num_ * (d / den_) + o.num_ * (d / o.den_), d);
  }

  RootOfUnity pow(long k) const {
    long e = ((num_ * (k % den_)) % den_ + den_) % den_;
    return RootOfUnity(e, den_);
  }

  RootOfUnity inverse() const { return RootOfUnity(den_ - num_, den_); }
  RootOfUnity conj() const { return inverse(); }

  bool operator==(const RootOfUnity& o) const { return num_ == o.num_ && den_ == o.den_; }
  // deterministic ordering: by (den, num) ascending
  auto operator<=>(const RootOfUnity& o) const {
    if (auto c = den_ <=> o.den_; c != 0) return c;
    return num_ <=> o.num_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  static RootOfUnity parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("RootOfUnity: expected \"num/den\", got \"" + s + "\"");
    long n = 0, d = 0;
    try {
      n = std::stol(s.substr(0, slash));
      d = std::stol(s.substr(slash + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("RootOfUnity: malformed \"" + s + "\"");
    }
    if (n < 0 || d <= 0) throw std::invalid_argument("RootOfUnity: need num >= 0, den >= 1 in \"" + s + "\"");
    return RootOfUnity(n, d);
  }

private:
  long num_, den_;
};

/// enumerate all roots of order exactly m, sorted
inline std::vector<RootOfUnity> roots_of_order(long m) {
  std::vector<RootOfUnity> out;
  for (long a = 0; a < m; ++a)
    if (std::gcd(a, m) == 1) out.emplace_back(a, m);
  return out;
}

/// all roots of order dividing m (the group mu_m), sorted by (den, num)
inline std::vector<RootOfUnity> roots_dividing(long m) {
  std::vector<RootOfUnity> out;
  for (long a = 0; a < m; ++a) out.emplace_back(a, m);
  std::sort(out.begin(), out.end());
  return out;
}

inline long euler_phi(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace poly {

// dense polynomials, index = exponent, no trailing-zero guarantee
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

inline int degree(const ZPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

inline int degree(const QPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  int da = degree(a), db = degree(b);
  if (da < 0 || db < 0) return {};
  ZPoly r(da + db + 1, mpz_class(0));
  for (int i = 0; i <= da; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j <= db; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// exact division of integer polynomials; throws if the division is not exact
inline ZPoly div_exact(ZPoly num, const ZPoly& den) {
  int dd = degree(den);
  if (dd < 0) throw std::invalid_argument("polynomial division by zero");
  int dn = degree(num);
  if (dn < 0) return {};
  ZPoly q(dn - dd + 1, mpz_class(0));
  for (int i = dn; i >= dd; --i) {
    if (num[i] == 0) continue;
    mpz_class c = num[i] / den[dd];
    if (c * den[dd] != num[i]) throw std::runtime_error("polynomial division not exact");
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  if (degree(num) >= 0) throw std::runtime_error("polynomial division not exact");
  return q;
}

// remainder of a rational polynomial modulo a monic integer polynomial
inline QPoly mod_monic(QPoly num, const ZPoly& mod) {
  int dd = degree(mod);
  assert(dd >= 0 && mod[dd] == 1);
  for (int i = degree(num); i >= dd; i = degree(num)) {
    mpq_class c = num[i];
    num[i] = 0;
    for (int j = 0; j < dd; ++j) num[i - dd + j] -= c * mod[j];
  }
  num.resize(dd, mpq_class(0));
  return num;
}

}  // namespace poly

/// The N-th cyclotomic polynomial, monic of degree phi(N), computed by
/// dividing x^N - 1 by the product of Phi_d over proper divisors d of N.
/// Memoized; the cache is guarded so concurrent calls are safe.
inline const poly::ZPoly& cyclotomic_poly(long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_poly: N must be >= 1");
  static std::map<long, poly::ZPoly> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // iterative fill so recursion never re-locks
  for (long m = 1; m <= n; ++m) {
    if (n % m != 0 || cache.count(m)) continue;
    poly::ZPoly xm1(m + 1, mpz_class(0));
    xm1[0] = -1;
    xm1[m] = 1;
    poly::ZPoly denom{mpz_class(1)};
    for (long d = 1; d < m; ++d)
      if (m % d == 0) denom = poly::mul(denom, cache.at(d));
    cache[m] = poly::div_exact(std::move(xm1), denom);
  }
  return cache.at(n);
}

/// Exact element of Q(zeta_N), stored as the residue of a rational
/// polynomial modulo Phi_N: `coeffs` has length phi(N) and equality is
/// plain coefficient equality.  Mixed-level arithmetic lifts both operands
/// to the lcm of their levels first.
class CycloNumber {
public:
  explicit CycloNumber(long level = 1)
      : level_(check_level(level)), coeffs_(euler_phi(level), mpq_class(0)) {}

  static CycloNumber from_rational(const mpq_class& q, long level = 1) {
    CycloNumber c(level);
    if (!c.coeffs_.empty()) c.coeffs_[0] = q;
    return c;
  }

  static CycloNumber one(long level = 1) { return from_rational(mpq_class(1), level); }

  /// the class of x, i.e. a fixed primitive N-th root of unity
  static CycloNumber zeta(long level) { return monomial(1, level); }

  /// embed the root e^{2 pi i a/m} at a level N with m | N
  static CycloNumber from_root(const RootOfUnity& r, long level) {
    if (level % r.den() != 0)
      throw std::invalid_argument("CycloNumber::from_root: level " + std::to_string(level) +
                                  " not divisible by root order " + std::to_string(r.den()));
    return monomial(r.num() * (level / r.den()), level);
  }

  long level() const { return level_; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  /// true iff the element lies in Q (only the constant coordinate in the
  /// power basis is nonzero); writes the value through `out` when given
  bool is_rational(mpq_class* out = nullptr) const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    if (out) *out = coeffs_.empty() ? mpq_class(0) : coeffs_[0];
    return true;
  }

  /// lift to a level N' with N | N' (sends zeta_N to zeta_{N'}^{N'/N})
  CycloNumber embed(long new_level) const {
    if (new_level % level_ != 0)
      throw std::invalid_argument("CycloNumber::embed: target level " + std::to_string(new_level) +
                                  " not divisible by source level " + std::to_string(level_));
    if (new_level == level_) return *this;
    long k = new_level / level_;
    poly::QPoly lifted(static_cast<size_t>(k) * (coeffs_.size() ? coeffs_.size() - 1 : 0) + 1, mpq_class(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) lifted[i * k] = coeffs_[i];
    CycloNumber out(new_level);
    out.coeffs_ = poly::mod_monic(std::move(lifted), cyclotomic_poly(new_level));
    return out;
  }

  CycloNumber operator+(const CycloNumber& o) const {
    auto [a, b] = aligned(*this, o);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    return a;
  }

  CycloNumber operator-(const CycloNumber& o) const {
    auto [a, b] = aligned(*this, o);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] -= b.coeffs_[i];
    return a;
  }

  CycloNumber operator-() const {
    CycloNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  CycloNumber operator*(const CycloNumber& o) const {
    auto [a, b] = aligned(*this, o);
    if (a.is_zero() || b.is_zero()) return CycloNumber(a.level_);
    size_t n = a.coeffs_.size();
    poly::QPoly prod(2 * n, mpq_class(0));
    for (size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if (b.coeffs_[j] == 0) continue;
        prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    CycloNumber out(a.level_);
    out.coeffs_ = poly::mod_monic(std::move(prod), cyclotomic_poly(a.level_));
    return out;
  }

  CycloNumber operator*(const mpq_class& q) const {
    CycloNumber r = *this;
    for (auto& c : r.coeffs_) c *= q;
    return r;
  }

  CycloNumber& operator+=(const CycloNumber& o) { return *this = *this + o; }
  CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }

  /// complex conjugation: the class of zeta_N maps to that of zeta_N^{N-1}
  CycloNumber conj() const { return galois(level_ - 1); }

  /// the Galois substitution zeta_N -> zeta_N^k (uses x^N = 1 in the quotient)
  CycloNumber galois(long k) const {
    k %= level_;
    if (k < 0) k += level_;
    poly::QPoly img(level_, mpq_class(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      img[(i * k) % level_] += coeffs_[i];
    }
    CycloNumber out(level_);
    out.coeffs_ = poly::mod_monic(std::move(img), cyclotomic_poly(level_));
    return out;
  }

  CycloNumber pow(long e) const {
    if (e < 0) throw std::invalid_argument("CycloNumber::pow: negative exponent");
    CycloNumber acc = one(level_), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  bool operator==(const CycloNumber& o) const {
    if (level_ == o.level_) return coeffs_ == o.coeffs_;
    auto [a, b] = aligned(*this, o);
    return a.coeffs_ == b.coeffs_;
  }

private:
  static long check_level(long level) {
    if (level < 1) throw std::invalid_argument("CycloNumber: level must be >= 1");
    return level;
  }

  static CycloNumber monomial(long e, long level) {
    check_level(level);
    e %= level;
    if (e < 0) e += level;
    poly::QPoly p(e + 1, mpq_class(0));
    p[e] = 1;
    CycloNumber out(level);
    out.coeffs_ = poly::mod_monic(std::move(p), cyclotomic_poly(level));
    return out;
  }

  static std::pair<CycloNumber, CycloNumber> aligned(const CycloNumber& a, const CycloNumber& b) {
    long l = std::lcm(a.level_, b.level_);
    return {a.embed(l), b.embed(l)};
  }

  long level_;
  std::vector<mpq_class> coeffs_;
};

inline CycloNumber operator*(const mpq_class& q, const CycloNumber& c) { return c * q; }

}  // namespace heisring
