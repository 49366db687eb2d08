#pragma once

// Scalar fields used by the exact and floating-point code paths, plus dense
// Gaussian elimination that works over either.
//
// PrimeField is Z/pZ with p = 2^61 - 1. Random evaluation over it is the
// exact route for generic-rank questions: a nonzero polynomial of degree d
// vanishes at a uniform random point with probability at most d / p.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace lrmc {

class PrimeField {
 public:
  static constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;

  constexpr PrimeField() = default;
  constexpr PrimeField(std::int64_t v) : v_(reduce_signed(v)) {}  // NOLINT(implicit)

  static constexpr PrimeField from_raw(std::uint64_t v) {
    PrimeField f;
    f.v_ = v % kModulus;
    return f;
  }

  template <class Rng>
  static PrimeField random(Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(0, kModulus - 1);
    return from_raw(dist(rng));
  }

  constexpr std::uint64_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr PrimeField operator+(PrimeField a, PrimeField b) {
    std::uint64_t s = a.v_ + b.v_;
    if (s >= kModulus) s -= kModulus;
    return from_reduced(s);
  }
  friend constexpr PrimeField operator-(PrimeField a, PrimeField b) {
    return from_reduced(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kModulus - b.v_);
  }
  friend constexpr PrimeField operator-(PrimeField a) { return PrimeField{} - a; }
  friend constexpr PrimeField operator*(PrimeField a, PrimeField b) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a.v_) * b.v_;
    std::uint64_t lo = static_cast<std::uint64_t>(prod & kModulus);
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
    std::uint64_t s = lo + hi;
    if (s >= kModulus) s -= kModulus;
    return from_reduced(s);
  }
  friend constexpr PrimeField operator/(PrimeField a, PrimeField b) { return a * b.inverse(); }

  PrimeField& operator+=(PrimeField o) { return *this = *this + o; }
  PrimeField& operator-=(PrimeField o) { return *this = *this - o; }
  PrimeField& operator*=(PrimeField o) { return *this = *this * o; }

  constexpr PrimeField pow(std::uint64_t e) const {
    PrimeField base = *this, acc = from_reduced(1);
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  /// Fermat inverse; the inverse of zero is zero.
  constexpr PrimeField inverse() const { return pow(kModulus - 2); }

  friend constexpr bool operator==(PrimeField, PrimeField) = default;

 private:
  static constexpr PrimeField from_reduced(std::uint64_t v) {
    PrimeField f;
    f.v_ = v;
    return f;
  }
  static constexpr std::uint64_t reduce_signed(std::int64_t v) {
    const std::int64_t p = static_cast<std::int64_t>(kModulus);
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return static_cast<std::uint64_t>(r);
  }

  std::uint64_t v_ = 0;
};

// Pivot magnitude: largest wins for reals, any nonzero for finite fields.
inline double pivot_magnitude(double x) { return std::fabs(x); }
inline double pivot_magnitude(PrimeField x) { return x.is_zero() ? 0.0 : 1.0; }

inline bool exactly_zero(double x) { return x == 0.0; }
inline bool exactly_zero(PrimeField x) { return x.is_zero(); }

/// Row-major dense matrix used by the field-generic routines.
template <class T>
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, T{}) {}

  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Determinant by partially pivoted elimination (works on a copy).
template <class T>
T determinant(DenseMatrix<T> a) {
  const int n = a.rows;
  T det = T(1);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = pivot_magnitude(a(c, c));
    for (int i = c + 1; i < n; ++i) {
      const double mag = pivot_magnitude(a(i, c));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (best == 0.0) return T(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    const T p = a(c, c);
    det = det * p;
    for (int i = c + 1; i < n; ++i) {
      const T f = a(i, c) / p;
      if (exactly_zero(f)) continue;
      for (int j = c; j < n; ++j) a(i, j) = a(i, j) - f * a(c, j);
    }
  }
  return det;
}

/// Exact rank over a field (for PrimeField); for doubles this is a plain
/// elimination rank with a zero threshold and should only be used on exact
/// data. Numerical rank lives in linalg.hpp.
template <class T>
int elimination_rank(DenseMatrix<T> a) {
  int rank = 0;
  for (int c = 0; c < a.cols && rank < a.rows; ++c) {
    int piv = -1;
    double best = 0.0;
    for (int i = rank; i < a.rows; ++i) {
      const double mag = pivot_magnitude(a(i, c));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a(rank, j), a(piv, j));
    const T p = a(rank, c);
    for (int i = rank + 1; i < a.rows; ++i) {
      const T f = a(i, c) / p;
      if (exactly_zero(f)) continue;
      for (int j = c; j < a.cols; ++j) a(i, j) = a(i, j) - f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace lrmc
