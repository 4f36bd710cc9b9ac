#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "projgeom/connection.hpp"

namespace projgeom {

/// Γ′^k_{ij} = Γ^k_{ij} + α_i δ^k_j + α_j δ^k_i. Christoffel specs get new
/// expressions; metric specs get a pointwise shift.
ConnectionSpec projective_change(const ConnectionSpec& spec, const OneFormField& alpha);

struct InvarianceResult {
  double weyl_residual = 0.0;                  ///< max norm(W^{∇^α} − W^∇)
  std::optional<double> cotton_residual;       ///< n = 2 only
};

/// Samples W (and C when n = 2) before and after the change at `points`.
InvarianceResult check_weyl_invariance(const ConnectionSpec& spec, const OneFormField& alpha,
                                       const std::vector<std::vector<double>>& points);

struct Witness {
  std::vector<double> point;
  std::optional<Eigen::MatrixXd> j;
  double residual = 0.0;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  bool marginal = false;  ///< max residual within a factor 10 of tol
  double max_residual = 0.0;
  std::vector<std::vector<double>> alphas;  ///< recovered α per point
  std::optional<Witness> witness;           ///< worst point when not equivalent
};

/// Pointwise: A = Γ_B − Γ_A, α_i = A^k_{ik}/(n+1), residual of A against
/// α_i δ^k_j + α_j δ^k_i. Throws HasTorsion.
EquivalenceVerdict projectively_equivalent(const ConnectionSpec& a, const ConnectionSpec& b,
                                           const std::vector<std::vector<double>>& points,
                                           double tol = 1e-8);

/// Max entry of (j+i)·A((j−i)e_m)·(j−i) over m, divided by (1+max|j|)³.
/// A(v)^k_j = A^k_{ij} v^i.
double twistor_component(const TensorValue& A, const Eigen::MatrixXd& j);

struct TwistorVerdict {
  bool same = false;
  bool marginal = false;
  double max_residual = 0.0;
  std::optional<Witness> witness;
};

/// Throws OddDimension.
TwistorVerdict same_twistor_structure(const ConnectionSpec& a, const ConnectionSpec& b,
                                      const std::vector<std::vector<double>>& points,
                                      const std::vector<Eigen::MatrixXd>& js, double tol = 1e-8);

struct TorsionRemoval {
  bool ok = false;
  double t1_norm = 0.0;  ///< max over points
  OneFormField alpha;
  std::optional<ConnectionSpec> spec;  ///< set when ok
  double residual_torsion = 0.0;       ///< max torsion of the output
};

/// α_j = T^k_{jk}/(n−1) symbolically; Γ′ = Γ − ½(α_i δ^k_j − α_j δ^k_i).
/// Fails when the trace-free torsion exceeds tol at a sampled point.
TorsionRemoval remove_torsion(const ConnectionSpec& spec,
                              const std::vector<std::vector<double>>& points, double tol = 1e-10);

void to_json(nlohmann::json& j, const Witness& w);

}  // namespace projgeom
