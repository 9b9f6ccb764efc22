#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "grothcat/error.hpp"

namespace grothcat {

class Scalar;

/// Coefficient field: exact rationals, or the prime field F_p.
class Field {
 public:
  Field() = default;

  static Field rational() { return Field(); }

  static Field prime(std::uint64_t p) {
    mpz_class z(std::to_string(p));
    if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 30) == 0) {
      fail(ErrorCode::input, "field modulus " + std::to_string(p) + " is not prime");
    }
    Field f;
    f.modulus_ = p;
    return f;
  }

  /// Accepts "rational" or "fp:P".
  static Field parse(const std::string& text) {
    if (text == "rational") return rational();
    if (text.rfind("fp:", 0) == 0) {
      try {
        std::size_t used = 0;
        unsigned long long p = std::stoull(text.substr(3), &used);
        if (used == text.size() - 3) return prime(p);
      } catch (const std::logic_error&) {
      }
    }
    fail(ErrorCode::input, "unknown field '" + text + "' (expected rational or fp:P)");
  }

  bool is_rational() const { return modulus_ == 0; }
  std::uint64_t modulus() const { return modulus_; }
  std::string to_string() const { return is_rational() ? "rational" : "fp:" + std::to_string(modulus_); }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long value) const;
  Scalar from_rational(const mpq_class& value) const;
  /// Parses "n" or "n/d".
  Scalar parse_scalar(const std::string& text) const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint64_t modulus_ = 0;
};

/// Field element. Every scalar carries its field; mixing fields is an error.
class Scalar {
 public:
  /// Rational zero.
  Scalar() = default;

  const Field& field() const { return field_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  /// Rationals: the value itself. F_p: the representative in [0, p).
  const mpq_class& value() const { return value_; }

  Scalar operator-() const {
    Scalar r = *this;
    r.value_ = -r.value_;
    r.canonicalize();
    return r;
  }

  Scalar& operator+=(const Scalar& o) {
    check(o);
    value_ += o.value_;
    canonicalize();
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    check(o);
    value_ -= o.value_;
    canonicalize();
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    check(o);
    value_ *= o.value_;
    canonicalize();
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    check(o);
    if (o.is_zero()) fail(ErrorCode::input, "division by zero");
    if (field_.is_rational()) {
      value_ /= o.value_;
    } else {
      value_ *= o.inverse_mod();
      canonicalize();
    }
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.field_ == b.field_ && a.value_ == b.value_; }

  std::string to_string() const { return value_.get_str(); }

  friend std::ostream& operator<<(std::ostream& out, const Scalar& s) { return out << s.to_string(); }

 private:
  friend class Field;

  Scalar(Field field, mpq_class value) : field_(field), value_(std::move(value)) {
    value_.canonicalize();
    canonicalize();
  }

  void check(const Scalar& o) const {
    if (!(field_ == o.field_)) {
      fail(ErrorCode::input, "mixed fields " + field_.to_string() + " and " + o.field_.to_string());
    }
  }

  void canonicalize() {
    if (field_.is_rational()) return;
    mpz_class p(std::to_string(field_.modulus()));
    mpz_class num = value_.get_num();
    mpz_class den = value_.get_den();
    if (den != 1) {
      mpz_class inv;
      if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0) {
        fail(ErrorCode::input, "denominator " + den.get_str() + " is not invertible mod " + p.get_str());
      }
      num *= inv;
    }
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    value_ = mpq_class(r);
  }

  mpq_class inverse_mod() const {
    mpz_class p(std::to_string(field_.modulus()));
    mpz_class num = value_.get_num();
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    return mpq_class(inv);
  }

  Field field_;
  mpq_class value_ = 0;
};

inline Scalar Field::zero() const { return Scalar(*this, mpq_class(0)); }
inline Scalar Field::one() const { return Scalar(*this, mpq_class(1)); }
inline Scalar Field::from_int(long value) const { return Scalar(*this, mpq_class(value)); }
inline Scalar Field::from_rational(const mpq_class& value) const { return Scalar(*this, value); }

inline Scalar Field::parse_scalar(const std::string& text) const {
  mpq_class q;
  bool ok = !text.empty() && q.set_str(text, 10) == 0;
  if (!ok || q.get_den() == 0) fail(ErrorCode::input, "invalid scalar '" + text + "'");
  return Scalar(*this, q);
}

}  // namespace grothcat
