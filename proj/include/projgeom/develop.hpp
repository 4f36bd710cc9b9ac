#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "projgeom/connection.hpp"

namespace projgeom {

/// Parallel frame of the Cartan connection along a path. Column 0 is the Λ
/// direction, columns 1..n the TMΛ directions.
struct CartanFrame {
  Eigen::MatrixXd phi;
  std::vector<double> base;
  std::vector<double> current;
  double error_estimate = 0.0;  ///< accumulated step-doubling estimate
  std::size_t steps = 0;
};

/// dΦ/dt = Φ·Â(γ̇) along a piecewise-linear path, adaptive RK4 with step
/// doubling, tolerance `tol` per unit length. Throws PathOutsideDomain,
/// StepFailure, HasTorsion.
CartanFrame cartan_transport(const ConnectionSpec& spec, const std::vector<std::vector<double>>& path,
                             const Eigen::MatrixXd& phi0, double tol = 1e-10);
CartanFrame cartan_transport(const ConnectionSpec& spec, const std::vector<std::vector<double>>& path,
                             double tol = 1e-10);

/// max|Φ_loop − I| for a closed path.
double holonomy_deviation(const ConnectionSpec& spec, const std::vector<std::vector<double>>& loop);

/// Square loop of side `side` centred at x₀ in the plane of orthonormal u, w,
/// starting and ending at x₀.
std::vector<std::vector<double>> square_loop(const std::vector<double>& x0, const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& w, double side);

/// 8 seeded loops, sides 0.1 and 0.2, in random planes through x₀.
std::vector<std::vector<std::vector<double>>> loop_family(const std::vector<double>& x0,
                                                          std::uint64_t seed = 0);

/// Max holonomy deviation over loop_family.
double holonomy_check(const ConnectionSpec& spec, const std::vector<double>& x0, std::uint64_t seed = 0);

/// Homogeneous coordinates scaled to max-abs 1 with the first nonzero entry positive.
struct ProjectivePoint {
  Eigen::VectorXd homogeneous;
  static ProjectivePoint from(const Eigen::VectorXd& v);
  double distance(const ProjectivePoint& other) const;
};

/// Max absolute 3×3 minor of the three normalized points; zero iff collinear.
double collinearity_defect(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& c);

struct DevelopedPoint {
  std::vector<double> target;
  ProjectivePoint image;
  double path_error = 0.0;  ///< straight path vs coordinate staircase
};

/// φ(x) = ΦΛ_x after certifying the loop family holonomy ≤ tol.
/// Throws NotFlat, PathOutsideDomain.
std::vector<DevelopedPoint> develop_map(const ConnectionSpec& spec, const std::vector<double>& x0,
                                        const std::vector<std::vector<double>>& targets,
                                        double tol = 1e-7, std::uint64_t seed = 0);

/// Γ = 0: the affine chart of ℝPⁿ.
ConnectionSpec model_connection(std::size_t n);
/// g = 4/(1+|x|²)² δ: constant curvature +1.
ConnectionSpec model_metric(std::size_t n);

/// RK4 for ẍ^k + Γ^k_{ij} ẋ^i ẋ^j = 0; returns steps+1 points. Throws LeftDomain.
std::vector<std::vector<double>> geodesic_trace(const ConnectionSpec& spec, const std::vector<double>& x0,
                                                const std::vector<double>& v0, double t_end,
                                                std::size_t steps);

void to_json(nlohmann::json& j, const DevelopedPoint& d);

}  // namespace projgeom
