/**
 * @file core.hpp
 * @brief Points and directions in C^n (n = 1, 2), error types, and small
 * numeric helpers shared by every module.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pluri {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

/// Input that does not match the contract of an operation (wrong dimension,
/// point outside the domain, malformed parameters).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public InputError {
public:
  using InputError::InputError;
};

/// A certified lower bound exceeded a certified upper bound. Always a bug.
class SoundnessError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The search could not produce any admissible witness within its budget.
class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief A point of C^n with n in {1, 2}, stored inline.
 *
 * Also used for tangent vectors; Direction pairs a base point with one.
 */
class Point {
public:
  static constexpr int kMaxDim = 2;

  Point() = default;
  explicit Point(cplx z1) : dim_{1}, c_{z1, 0.0} {}
  Point(cplx z1, cplx z2) : dim_{2}, c_{z1, z2} {}

  static Point zeros(int dim) {
    check_dim(dim);
    Point p;
    p.dim_ = dim;
    return p;
  }
  static Point unit(int dim, int index) {
    Point p = zeros(dim);
    p.c_.at(static_cast<std::size_t>(index)) = 1.0;
    return p;
  }

  static void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
      throw DimensionError("dimension must be 1 or 2, got " +
                           std::to_string(dim));
  }

  int dim() const { return dim_; }
  cplx operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  cplx &operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  double norm_sq() const {
    double s = 0;
    for (int i = 0; i < dim_; ++i)
      s += std::norm(c_[static_cast<std::size_t>(i)]);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  bool is_finite() const {
    for (int i = 0; i < dim_; ++i) {
      auto z = c_[static_cast<std::size_t>(i)];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        return false;
    }
    return true;
  }

  Point &operator+=(const Point &o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i)
      (*this)[i] += o[i];
    return *this;
  }
  Point &operator-=(const Point &o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i)
      (*this)[i] -= o[i];
    return *this;
  }
  Point &operator*=(cplx s) {
    for (int i = 0; i < dim_; ++i)
      (*this)[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point &b) { return a += b; }
  friend Point operator-(Point a, const Point &b) { return a -= b; }
  friend Point operator*(cplx s, Point a) { return a *= s; }
  friend Point operator*(Point a, cplx s) { return a *= s; }
  friend Point operator/(Point a, cplx s) { return a *= (1.0 / s); }
  friend Point operator-(Point a) { return a *= -1.0; }

  friend bool operator==(const Point &a, const Point &b) {
    if (a.dim_ != b.dim_)
      return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i])
        return false;
    return true;
  }

  void require_same(const Point &o) const {
    if (o.dim_ != dim_)
      throw DimensionError("point dimensions differ: " + std::to_string(dim_) +
                           " vs " + std::to_string(o.dim_));
  }

private:
  int dim_ = 1;
  std::array<cplx, kMaxDim> c_{};
};

/// Hermitian inner product <a, b> = sum a_i conj(b_i).
inline cplx inner(const Point &a, const Point &b) {
  a.require_same(b);
  cplx s = 0;
  for (int i = 0; i < a.dim(); ++i)
    s += a[i] * std::conj(b[i]);
  return s;
}

inline double distance(const Point &a, const Point &b) { return (a - b).norm(); }

/// A tangent vector at a base point. The vector is never zero.
struct Direction {
  Point base;
  Point vector;

  Direction(Point b, Point v) : base{b}, vector{v} {
    base.require_same(vector);
    if (!(vector.norm() > 0))
      throw InputError("direction vector must be nonzero");
  }
};

/// log|z - w| style helper that returns -inf at zero instead of raising.
inline double safe_log(double x) { return x > 0 ? std::log(x) : -kInf; }

/// Splitmix64 step; used to derive independent RNG streams from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

} // namespace pluri
