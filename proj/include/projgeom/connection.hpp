#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "projgeom/expr.hpp"
#include "projgeom/tensor.hpp"

namespace projgeom {

/// A 1-form α = α_i dx^i with expression coefficients.
struct OneFormField {
  std::size_t dim = 0;
  std::vector<Expr> components;

  static OneFormField zero(std::size_t dim);
  std::vector<double> evaluate(std::span<const double> p) const;
};

/// How many derivatives of Γ an evaluation carries.
enum class Derivatives : int { None = 0, First = 1, Second = 2 };

/// A linear connection on a coordinate chart, given either by Christoffel
/// symbols Γ^k_{ij} (∇_{∂_i}∂_j = Γ^k_{ij}∂_k) or by a metric g_{ij} whose
/// Levi-Civita connection is meant. Missing entries are zero.
///
/// Metric-sourced specs may carry projective shifts: 1-forms α added
/// pointwise as Γ^k_{ij} + α_i δ^k_j + α_j δ^k_i after the Levi-Civita step.
class ConnectionSpec {
 public:
  enum class Source { Christoffel, Metric };

  /// `table` holds n³ entries indexed (k*n + i)*n + j.
  static ConnectionSpec from_christoffel(std::size_t dim, std::vector<std::optional<Expr>> table);
  /// `table` holds n² entries indexed i*n + j; only i ≤ j is read.
  static ConnectionSpec from_metric(std::size_t dim, std::vector<std::optional<Expr>> table);

  std::size_t dim() const noexcept { return dim_; }
  Source source() const noexcept { return source_; }
  const std::optional<Expr>& christoffel(std::size_t k, std::size_t i, std::size_t j) const;
  const std::optional<Expr>& metric(std::size_t i, std::size_t j) const;
  const std::vector<OneFormField>& shifts() const noexcept { return shifts_; }

  ConnectionSpec with_shift(OneFormField alpha) const;

  /// Optional coordinate box [lo, hi]^n outside which evaluation fails.
  const std::optional<std::pair<double, double>>& domain() const noexcept { return domain_; }
  ConnectionSpec with_domain(double lo, double hi) const;
  bool in_domain(std::span<const double> p) const;

 private:
  std::size_t dim_ = 0;
  Source source_ = Source::Christoffel;
  std::vector<std::optional<Expr>> table_;
  std::vector<OneFormField> shifts_;
  std::optional<std::pair<double, double>> domain_;
};

/// Christoffel symbols and their partial derivatives at one point.
struct ConnectionValue {
  std::size_t dim = 0;
  std::vector<double> point;
  Derivatives derivs = Derivatives::None;
  std::vector<double> gamma;    ///< Γ^k_{ij} at ((k*n+i)*n+j)
  std::vector<double> dgamma;   ///< ∂_l Γ^k_{ij}
  std::vector<double> ddgamma;  ///< ∂_l ∂_m Γ^k_{ij}

  ConnectionValue() = default;
  ConnectionValue(std::size_t n, std::vector<double> p, Derivatives d);

  double gamma_at(std::size_t k, std::size_t i, std::size_t j) const { return gamma[(k * dim + i) * dim + j]; }
  double& gamma_at(std::size_t k, std::size_t i, std::size_t j) { return gamma[(k * dim + i) * dim + j]; }
  double dgamma_at(std::size_t k, std::size_t i, std::size_t j, std::size_t l) const {
    return dgamma[((k * dim + i) * dim + j) * dim + l];
  }
  double& dgamma_at(std::size_t k, std::size_t i, std::size_t j, std::size_t l) {
    return dgamma[((k * dim + i) * dim + j) * dim + l];
  }
  double ddgamma_at(std::size_t k, std::size_t i, std::size_t j, std::size_t l, std::size_t m) const {
    return ddgamma[(((k * dim + i) * dim + j) * dim + l) * dim + m];
  }
  double& ddgamma_at(std::size_t k, std::size_t i, std::size_t j, std::size_t l, std::size_t m) {
    return ddgamma[(((k * dim + i) * dim + j) * dim + l) * dim + m];
  }

  bool has_first() const { return derivs >= Derivatives::First; }
  bool has_second() const { return derivs >= Derivatives::Second; }

  ConnectionValue& operator+=(const ConnectionValue& other);
  ConnectionValue& operator-=(const ConnectionValue& other);
};

/// Γ and `derivs` of its derivatives at p. Metric sources go through
/// levi_civita. Throws DomainError outside the domain box or of an entry.
ConnectionValue evaluate(const ConnectionSpec& spec, std::span<const double> p,
                         Derivatives derivs = Derivatives::First);

/// Levi-Civita connection of a metric spec, computed in jet arithmetic so
/// derivatives of Γ are exact. Throws SingularMetric when cond(g) > 1e12.
ConnectionValue levi_civita(const ConnectionSpec& spec, std::span<const double> p,
                            Derivatives derivs = Derivatives::First);

/// T^k_{ij} = Γ^k_{ij} − Γ^k_{ji}; variance (up, down, down).
TensorValue torsion(const ConnectionValue& cv);

/// R^l_{kij} with R(∂_i,∂_j)∂_k = R^l_{kij} ∂_l; variance (up, down, down, down).
///
/// This slot convention is used by every module that consumes curvature.
TensorValue curvature(const ConnectionValue& cv);

/// ∂_p R^l_{kij}, slots (l, k, i, j, p). Needs second derivatives of Γ.
TensorValue curvature_derivative(const ConnectionValue& cv);

/// ∇_p R^l_{kij}, slots (l, k, i, j, p).
TensorValue covariant_curvature_derivative(const ConnectionValue& cv);

/// r(X,Y) = Tr(Z ↦ R(X,Z)Y), i.e. r_{ij} = R^m_{j i m}.
TensorValue ricci(const TensorValue& R);

/// s(X,Y) = Tr R(X,Y), i.e. s_{ij} = R^k_{kij}.
TensorValue trace2form(const TensorValue& R);

/// Cyclic sum R(X,Y)Z + R(Y,Z)X + R(Z,X)Y in the R^l_{kij} layout.
TensorValue first_bianchi(const TensorValue& R);

/// Σ_cyc (∇_X R)(Y,Z) + R(T(X,Y),Z), slots (l, k, X, Y, Z).
TensorValue second_bianchi(const ConnectionValue& cv);

/// ∂_l g_{ij} − Γ^m_{li} g_{mj} − Γ^m_{lj} g_{im} for a metric spec; slots (l, i, j).
TensorValue metricity_defect(const ConnectionSpec& spec, std::span<const double> p);

/// Exact value-level evaluation of the metric matrix g_{ij}(p).
std::vector<double> metric_at(const ConnectionSpec& spec, std::span<const double> p);

}  // namespace projgeom
