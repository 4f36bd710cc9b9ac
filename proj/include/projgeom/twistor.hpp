#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "projgeom/connection.hpp"

namespace projgeom {

/// Block-diagonal 2×2 rotations ((0,−1),(1,0)). Throws OddDimension.
Eigen::MatrixXd standard_j(std::size_t n);

/// `count` complex structures g j₀ g⁻¹ with g uniform in [−1,1]^{n×n},
/// redrawn while cond(g) > 1e6. Deterministic in `seed`.
std::vector<Eigen::MatrixXd> sample_complex_structures(std::size_t n, std::size_t count,
                                                       std::uint64_t seed);

/// Orthonormal basis of {m : m j = −j m}, of dimension n²/2.
std::vector<Eigen::MatrixXd> anticommutant_basis(const Eigen::MatrixXd& j);

struct TwistorPoint {
  std::vector<double> x;
  Eigen::MatrixXd j;
};

/// Twistor points over `xs` with j = g j₀ g⁻¹, g = I + ½U, U uniform in
/// [−1,1]^{n×n}, redrawn while cond(g) > 10.
std::vector<TwistorPoint> sample_twistor_points(const std::vector<std::vector<double>>& xs,
                                                std::uint64_t seed);

/// Throws NotAlmostComplex unless |j² + I| ≤ 1e-12·(1 + |j|)².
void check_complex_structure(const Eigen::MatrixXd& j);

/// Local chart of J(M) around (x₀, j₀): coordinates y = (x, c) with
/// j(c) = exp(2 Σ c_a m_a) j₀.
class TwistorChart {
 public:
  TwistorChart(const ConnectionSpec& spec, const TwistorPoint& anchor);

  std::size_t base_dim() const { return n_; }
  std::size_t fibre_dim() const { return basis_.size(); }
  std::size_t dim() const { return n_ + basis_.size(); }
  const std::vector<Eigen::MatrixXd>& basis() const { return basis_; }
  Eigen::VectorXd origin() const;

  Eigen::MatrixXd j_at(const Eigen::VectorXd& y) const;
  /// ∂j/∂c_a at y.
  std::vector<Eigen::MatrixXd> fibre_tangents(const Eigen::VectorXd& y) const;
  /// Matrix of J^∇ at y in (x, c) coordinates.
  Eigen::MatrixXd acs(const Eigen::VectorXd& y) const;

 private:
  ConnectionSpec spec_;
  std::size_t n_;
  Eigen::MatrixXd j0_;
  std::vector<Eigen::MatrixXd> basis_;
  Eigen::VectorXd origin_;
};

/// J^∇ from Γ at x alone, in the chart anchored at tp (c = 0).
Eigen::MatrixXd twistor_acs(const ConnectionValue& cv, const TwistorPoint& tp);

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// N(U,V) = [JU,JV] − [U,V] − J[JU,V] − J[U,JV] at y, brackets by central
/// differences with step h.
Eigen::VectorXd nijenhuis_fields(const TwistorChart& chart, const Eigen::VectorXd& y,
                                 const VectorField& U, const VectorField& V, double h);

/// Max over constant-coefficient pairs of |N(U,V)| at the anchor, from
/// nijenhuis_fields at steps h and h/2 combined by one Richardson step
/// (error O(h⁴)). An empty `pairs` list means all coordinate pairs.
/// Throws HasTorsion.
double nijenhuis(const ConnectionSpec& spec, const TwistorPoint& tp,
                 const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
                 double h = 1e-4);

enum class Integrability { Integrable, Obstruction, Inconclusive };

/// ≤ 1e-5 integrable, ≥ 1e-2 obstruction, otherwise inconclusive.
Integrability classify_nijenhuis(double residual);
std::string to_string(Integrability v);

}  // namespace projgeom
