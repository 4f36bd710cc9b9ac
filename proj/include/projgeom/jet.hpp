#pragma once

#include <cstddef>
#include <vector>

namespace projgeom {

/// Truncated multivariate Taylor expansion of a scalar field at a point:
/// value, gradient, Hessian and third-derivative tensor in `dim` variables.
///
/// Derivatives above `order()` are zero-filled and considered absent. The
/// second and third derivative arrays are kept exactly symmetric: every entry
/// is computed once for sorted indices and copied to all permutations.
class Jet3 {
 public:
  static constexpr int kMaxOrder = 3;

  Jet3() = default;
  Jet3(std::size_t dim, int order);

  static Jet3 constant(std::size_t dim, int order, double value);
  /// The coordinate function x_{index} (0-based) evaluated at `value`.
  static Jet3 variable(std::size_t dim, int order, std::size_t index, double value);

  std::size_t dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }

  double value() const noexcept { return value_; }
  double d1(std::size_t i) const { return d1_[i]; }
  double d2(std::size_t i, std::size_t j) const { return d2_[i * dim_ + j]; }
  double d3(std::size_t i, std::size_t j, std::size_t k) const {
    return d3_[(i * dim_ + j) * dim_ + k];
  }

  /// The jet of ∂f/∂x_i, one order lower.
  Jet3 derivative(std::size_t i) const;
  /// Same field, partials above `order` dropped.
  Jet3 truncated(int order) const;

  /// Chain rule for a univariate function: `phi[m]` is the m-th derivative of
  /// the outer function evaluated at value().
  Jet3 compose(double phi0, double phi1, double phi2, double phi3) const;

  Jet3& operator+=(const Jet3& other);
  Jet3& operator-=(const Jet3& other);
  Jet3& operator*=(double s);

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
  friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
  friend Jet3 operator-(Jet3 a) { return a *= -1.0; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  /// Throws DomainError when b.value() == 0.
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

 private:
  void set_d2(std::size_t i, std::size_t j, double v);
  void set_d3(std::size_t i, std::size_t j, std::size_t k, double v);
  static Jet3 like(const Jet3& a, const Jet3& b);

  std::size_t dim_ = 0;
  int order_ = 0;
  double value_ = 0.0;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> d3_;
};

Jet3 sin(const Jet3& f);
Jet3 cos(const Jet3& f);
Jet3 exp(const Jet3& f);
Jet3 log(const Jet3& f);
Jet3 sqrt(const Jet3& f);
/// Integer powers by repeated multiplication; negative powers via reciprocal.
Jet3 pow_int(const Jet3& f, int exponent);
/// Real powers; the base must be positive.
Jet3 pow_real(const Jet3& f, double exponent);

}  // namespace projgeom
