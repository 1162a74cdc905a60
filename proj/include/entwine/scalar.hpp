#pragma once

// Exact scalar types: Q via GMP's mpq_class, F_p via a runtime-modulus Fp.
// Both plug into Eigen through NumTraits specializations below.

#include <gmpxx.h>
#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entwine {

using Rat = mpq_class;

struct EntwineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_prime_u64(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Element of F_p.  The modulus travels with the value; a default constructed
// element (p == 0) is a modulus-free integer literal which adopts the modulus
// of the other operand on first contact.  Eigen and generic template code
// create Scalar(0) / Scalar(1) literals, which is what that case is for.
class Fp {
  long long v_ = 0;
  long long p_ = 0;

  static long long norm(long long x, long long p) {
    long long r = x % p;
    return r < 0 ? r + p : r;
  }

 public:
  Fp() = default;
  Fp(long long x) : v_(x) {}  // NOLINT: implicit by design, literal use
  Fp(long long x, long long p) : v_(norm(x, p)), p_(p) {}

  long long value() const { return v_; }
  long long modulus() const { return p_; }

  static long long merge_mod(const Fp& a, const Fp& b) {
    if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_)
      throw EntwineError("Fp: mixed moduli " + std::to_string(a.p_) + " vs " +
                         std::to_string(b.p_));
    return a.p_ != 0 ? a.p_ : b.p_;
  }

  // Reduce into F_p once the modulus is known.
  Fp pinned(long long p) const {
    if (p_ != 0 && p_ != p) throw EntwineError("Fp: repin to different modulus");
    return Fp(v_, p);
  }

  friend Fp operator+(const Fp& a, const Fp& b) {
    long long p = merge_mod(a, b);
    if (p == 0) return Fp(a.v_ + b.v_);
    return Fp(norm(a.v_, p) + norm(b.v_, p), p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    long long p = merge_mod(a, b);
    if (p == 0) return Fp(a.v_ - b.v_);
    return Fp(norm(a.v_, p) - norm(b.v_, p), p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    long long p = merge_mod(a, b);
    if (p == 0) return Fp(a.v_ * b.v_);
    return Fp(norm(a.v_, p) * norm(b.v_, p), p);
  }
  Fp operator-() const { return p_ == 0 ? Fp(-v_) : Fp(p_ - v_, p_); }

  Fp inverse() const {
    if (p_ == 0) {
      if (v_ == 1 || v_ == -1) return *this;
      throw EntwineError("Fp: inverse of modulus-free value");
    }
    if (v_ == 0) throw EntwineError("Fp: division by zero");
    // extended Euclid
    long long a = v_, b = p_, x0 = 1, x1 = 0;
    while (b != 0) {
      long long q = a / b;
      long long t = a - q * b; a = b; b = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    if (a != 1) throw EntwineError("Fp: modulus not prime, no inverse");
    return Fp(x0, p_);
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    long long p = merge_mod(a, b);
    if (p == 0) return a * b.inverse();
    return a.pinned(p) * b.pinned(p).inverse();
  }

  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    long long p = merge_mod(a, b);
    if (p == 0) return a.v_ == b.v_;
    return norm(a.v_, p) == norm(b.v_, p);
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
};

struct Field {
  enum class Kind { Q, Fp } kind = Kind::Q;
  long long p = 0;

  static Field rationals() { return Field{Kind::Q, 0}; }
  static Field prime(long long p) {
    if (p >= (1LL << 31) || !is_prime_u64(p))
      throw EntwineError("field: modulus must be a prime < 2^31, got " +
                         std::to_string(p));
    return Field{Kind::Fp, p};
  }
  // "q" or "fp:P"
  static Field parse(const std::string& s) {
    if (s == "q" || s == "Q") return rationals();
    if (s.rfind("fp:", 0) == 0) {
      try {
        return prime(std::stoll(s.substr(3)));
      } catch (const std::invalid_argument&) {
        throw EntwineError("field: bad modulus in '" + s + "'");
      } catch (const std::out_of_range&) {
        throw EntwineError("field: bad modulus in '" + s + "'");
      }
    }
    throw EntwineError("field: expected 'q' or 'fp:P', got '" + s + "'");
  }
  std::string str() const {
    return kind == Kind::Q ? "q" : "fp:" + std::to_string(p);
  }
  friend bool operator==(const Field& a, const Field& b) {
    return a.kind == b.kind && a.p == b.p;
  }
};

inline Rat rat_from_string(const std::string& s) {
  try {
    Rat r(s);
    if (r.get_den() == 0)
      throw EntwineError("scalar: cannot parse '" + s + "': zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw EntwineError("scalar: cannot parse '" + s + "'");
  }
}

template <class S>
S scalar_from_rat(const Rat& r, const Field& f);

template <>
inline Rat scalar_from_rat<Rat>(const Rat& r, const Field& f) {
  if (f.kind != Field::Kind::Q) throw EntwineError("field mismatch: want q");
  return r;
}

template <>
inline Fp scalar_from_rat<Fp>(const Rat& r, const Field& f) {
  if (f.kind != Field::Kind::Fp) throw EntwineError("field mismatch: want fp");
  if (r.get_den() != 1)
    throw EntwineError("scalar: non-integral constant '" + r.get_str() +
                       "' cannot live in F_" + std::to_string(f.p));
  mpz_class num = r.get_num();
  mpz_class m = num % mpz_class(static_cast<long>(f.p));
  return Fp(m.get_si(), f.p);
}

inline std::string scalar_str(const Rat& r) { return r.get_str(); }
inline std::string scalar_str(const Fp& x) { return std::to_string(x.value()); }

template <class S>
bool is_zero(const S& x) {
  return x == S(0);
}

template <class S>
struct FieldOf;
template <>
struct FieldOf<Rat> {
  static Field get(const Rat&) { return Field::rationals(); }
};
template <>
struct FieldOf<Fp> {
  static Field get(const Fp& x) {
    return x.modulus() ? Field::prime(x.modulus()) : Field::rationals();
  }
};

}  // namespace entwine

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

template <>
struct NumTraits<entwine::Fp> : GenericNumTraits<entwine::Fp> {
  typedef entwine::Fp Real;
  typedef entwine::Fp NonInteger;
  typedef entwine::Fp Nested;
  static inline Real epsilon() { return entwine::Fp(0); }
  static inline Real dummy_precision() { return entwine::Fp(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 0,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 6
  };
};

}  // namespace Eigen
