#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace heisring {

/// Residue arithmetic with a runtime modulus.  Operations on mismatched
/// moduli are rejected, and division is defined only by units (extended
/// gcd); dividing by a non-unit is a hard error rather than a silent wrap.
class ZMod {
public:
  ZMod() : value_(0), modulus_(0) {}  // unattached zero, absorbs any modulus
  ZMod(mpz_class value, mpz_class modulus) : modulus_(std::move(modulus)) {
    if (modulus_ <= 0) throw std::invalid_argument("ZMod: modulus must be positive");
    value_ = mod(value);
  }

  const mpz_class& value() const { return value_; }
  const mpz_class& modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  ZMod operator+(const ZMod& o) const {
    const mpz_class& m = join(o);
    if (m == 0) return ZMod();
    return ZMod(value_ + o.value_, m);
  }
  ZMod operator-(const ZMod& o) const {
    const mpz_class& m = join(o);
    if (m == 0) return ZMod();
    return ZMod(value_ - o.value_, m);
  }
  ZMod operator*(const ZMod& o) const {
    const mpz_class& m = join(o);
    if (m == 0) return ZMod();
    return ZMod(value_ * o.value_, m);
  }
  ZMod operator-() const { return modulus_ == 0 ? ZMod() : ZMod(-value_, modulus_); }

  ZMod operator*(const mpz_class& k) const {
    return modulus_ == 0 ? ZMod() : ZMod(value_ * k, modulus_);
  }

  /// multiplicative inverse; throws if gcd(value, modulus) != 1
  ZMod inverse() const {
    if (modulus_ == 0) throw std::domain_error("ZMod: inverse of unattached zero");
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
    if (g != 1)
      throw std::domain_error("ZMod: " + value_.get_str() + " is not a unit mod " + modulus_.get_str());
    return ZMod(s, modulus_);
  }

  bool operator==(const ZMod& o) const {
    if (modulus_ == 0 || o.modulus_ == 0) return value_ == 0 && o.value_ == 0;
    if (modulus_ != o.modulus_) return false;
    return value_ == o.value_;
  }

  std::string str() const { return value_.get_str(); }

private:
  mpz_class mod(const mpz_class& v) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
    return r;
  }
  // an unattached zero adopts the other operand's modulus
  const mpz_class& join(const ZMod& o) const {
    if (modulus_ == 0) return o.modulus_;
    if (o.modulus_ == 0) return modulus_;
    if (modulus_ != o.modulus_)
      throw std::invalid_argument("ZMod: mixed moduli " + modulus_.get_str() + " and " + o.modulus_.get_str());
    return modulus_;
  }

  mpz_class value_, modulus_;
};

/// An element of Z_ell known to precision n, i.e. a residue mod ell^n.
class TruncatedPadic {
public:
  TruncatedPadic(long ell, int precision, mpz_class value)
      : ell_(ell), precision_(precision), residue_(std::move(value), pow_ell(ell, precision)) {
    if (precision < 1) throw std::invalid_argument("TruncatedPadic: precision must be >= 1");
  }

  long ell() const { return ell_; }
  int precision() const { return precision_; }
  const mpz_class& value() const { return residue_.value(); }
  const ZMod& residue() const { return residue_; }

  TruncatedPadic operator+(const TruncatedPadic& o) const { return wrap(residue_ + o.residue_, o); }
  TruncatedPadic operator-(const TruncatedPadic& o) const { return wrap(residue_ - o.residue_, o); }
  TruncatedPadic operator*(const TruncatedPadic& o) const { return wrap(residue_ * o.residue_, o); }
  TruncatedPadic inverse() const { return TruncatedPadic(ell_, precision_, residue_.inverse().value()); }

  /// reduce to a lower precision
  TruncatedPadic truncate(int new_precision) const {
    if (new_precision > precision_) throw std::invalid_argument("TruncatedPadic: cannot raise precision");
    return TruncatedPadic(ell_, new_precision, value());
  }

  bool operator==(const TruncatedPadic& o) const {
    return ell_ == o.ell_ && precision_ == o.precision_ && residue_ == o.residue_;
  }

  static mpz_class pow_ell(long ell, int n) {
    if (ell < 2) throw std::invalid_argument("TruncatedPadic: prime must be >= 2");
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(n));
    return m;
  }

private:
  TruncatedPadic wrap(const ZMod& r, const TruncatedPadic& o) const {
    if (ell_ != o.ell_ || precision_ != o.precision_)
      throw std::invalid_argument("TruncatedPadic: mixed precisions");
    return TruncatedPadic(ell_, precision_, r.value());
  }

  long ell_;
  int precision_;
  ZMod residue_;
};

}  // namespace heisring
