#include "projgeom/develop.hpp"

#include <cmath>

#include "projgeom/algebra.hpp"
#include "projgeom/error.hpp"
#include "projgeom/random.hpp"

namespace projgeom {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kTorsionTol = 1e-10;
constexpr std::size_t kMaxSteps = 2000000;

MatrixXd connection_along(const ConnectionSpec& spec, const VectorXd& x, const VectorXd& v) {
  std::vector<double> p(x.data(), x.data() + x.size());
  ConnectionValue cv;
  try {
    cv = evaluate(spec, p, Derivatives::First);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainError) throw Error(ErrorKind::PathOutsideDomain, e.detail());
    throw;
  }
  const auto A = cartan_connection(cv);
  MatrixXd out = MatrixXd::Zero(A[0].rows(), A[0].cols());
  for (std::size_t i = 0; i < A.size(); ++i) out += v(static_cast<Eigen::Index>(i)) * A[i];
  return out;
}

VectorXd as_vector(const std::vector<double>& p) { return Eigen::Map<const VectorXd>(p.data(), p.size()); }

std::vector<double> as_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

CartanFrame cartan_transport(const ConnectionSpec& spec, const std::vector<std::vector<double>>& path,
                             const MatrixXd& phi0, double tol) {
  const std::size_t n = spec.dim();
  if (path.empty()) throw Error(ErrorKind::ContractViolation, "empty path");
  for (const auto& p : path) {
    if (p.size() != n) throw Error(ErrorKind::DimensionMismatch, "path point of wrong dimension");
    if (!spec.in_domain(p)) throw Error(ErrorKind::PathOutsideDomain, "path leaves the chart domain box");
  }
  if (phi0.rows() != static_cast<Eigen::Index>(n + 1) || phi0.cols() != phi0.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "initial frame must be (n+1)x(n+1)");
  }
  for (const auto& p : path) {
    ConnectionValue cv;
    try {
      cv = evaluate(spec, p, Derivatives::None);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DomainError) throw Error(ErrorKind::PathOutsideDomain, e.detail());
      throw;
    }
    if (norm(torsion(cv)) > kTorsionTol) throw Error(ErrorKind::HasTorsion, "Cartan transport needs zero torsion");
  }

  CartanFrame frame;
  frame.phi = phi0;
  frame.base = path.front();
  frame.current = path.front();
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const VectorXd a = as_vector(path[s]);
    const VectorXd d = as_vector(path[s + 1]) - a;
    const double len = d.norm();
    if (len == 0.0) continue;
    auto rhs = [&](double t, const MatrixXd& phi) -> MatrixXd {
      return phi * connection_along(spec, a + t * d, d);
    };
    auto rk4 = [&](double t, const MatrixXd& phi, double h) -> MatrixXd {
      const MatrixXd k1 = rhs(t, phi);
      const MatrixXd k2 = rhs(t + 0.5 * h, phi + 0.5 * h * k1);
      const MatrixXd k3 = rhs(t + 0.5 * h, phi + 0.5 * h * k2);
      const MatrixXd k4 = rhs(t + h, phi + h * k3);
      return phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    double t = 0.0;
    double h = std::min(1.0, 0.05 / len);
    while (t < 1.0) {
      h = std::min(h, 1.0 - t);
      const MatrixXd one = rk4(t, frame.phi, h);
      const MatrixXd half = rk4(t + 0.5 * h, rk4(t, frame.phi, 0.5 * h), 0.5 * h);
      const double scale = 1.0 + frame.phi.cwiseAbs().maxCoeff();
      const double err = (half - one).cwiseAbs().maxCoeff() / 15.0;
      const double allowed = tol * h * len * scale;
      if (err <= allowed || h < 1e-14) {
        if (!(err <= allowed)) throw Error(ErrorKind::StepFailure, "step size underflow");
        frame.phi = half + (half - one) / 15.0;
        frame.error_estimate += err;
        t += h;
        if (++frame.steps > kMaxSteps) throw Error(ErrorKind::StepFailure, "step budget exhausted");
      }
      const double grow = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
      h *= std::clamp(grow, 0.1, 4.0);
    }
    frame.current = path[s + 1];
  }
  return frame;
}

CartanFrame cartan_transport(const ConnectionSpec& spec, const std::vector<std::vector<double>>& path,
                             double tol) {
  const auto m = static_cast<Eigen::Index>(spec.dim() + 1);
  return cartan_transport(spec, path, MatrixXd::Identity(m, m), tol);
}

double holonomy_deviation(const ConnectionSpec& spec, const std::vector<std::vector<double>>& loop) {
  const CartanFrame f = cartan_transport(spec, loop);
  const auto m = f.phi.rows();
  return (f.phi - MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
}

std::vector<std::vector<double>> square_loop(const std::vector<double>& x0, const VectorXd& u,
                                             const VectorXd& w, double side) {
  const VectorXd c = as_vector(x0);
  const double r = 0.5 * side;
  return {x0,
          as_std(c + r * u - r * w),
          as_std(c + r * u + r * w),
          as_std(c - r * u + r * w),
          as_std(c - r * u - r * w),
          as_std(c + r * u - r * w),
          x0};
}

std::vector<std::vector<std::vector<double>>> loop_family(const std::vector<double>& x0, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  Rng rng(seed);
  std::vector<std::vector<std::vector<double>>> loops;
  for (int k = 0; k < 4; ++k) {
    VectorXd u(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.uniform(-1.0, 1.0);
    u.normalize();
    w -= w.dot(u) * u;
    w.normalize();
    for (double side : {0.1, 0.2}) loops.push_back(square_loop(x0, u, w, side));
  }
  return loops;
}

double holonomy_check(const ConnectionSpec& spec, const std::vector<double>& x0, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& loop : loop_family(x0, seed)) worst = std::max(worst, holonomy_deviation(spec, loop));
  return worst;
}

ProjectivePoint ProjectivePoint::from(const VectorXd& v) {
  const double m = v.cwiseAbs().maxCoeff();
  if (!(m > 0.0)) throw Error(ErrorKind::ContractViolation, "zero vector has no projective point");
  VectorXd h = v / m;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (std::abs(h(i)) > 1e-12) {
      if (h(i) < 0.0) h = -h;
      break;
    }
  }
  return {h};
}

double ProjectivePoint::distance(const ProjectivePoint& other) const {
  return (homogeneous - other.homogeneous).cwiseAbs().maxCoeff();
}

double collinearity_defect(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& c) {
  const auto m = a.homogeneous.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k) {
        Eigen::Matrix3d M;
        M << a.homogeneous(i), a.homogeneous(j), a.homogeneous(k), b.homogeneous(i), b.homogeneous(j),
            b.homogeneous(k), c.homogeneous(i), c.homogeneous(j), c.homogeneous(k);
        worst = std::max(worst, std::abs(M.determinant()));
      }
  return worst;
}

std::vector<DevelopedPoint> develop_map(const ConnectionSpec& spec, const std::vector<double>& x0,
                                        const std::vector<std::vector<double>>& targets, double tol,
                                        std::uint64_t seed) {
  const double hol = holonomy_check(spec, x0, seed);
  if (hol > tol) throw Error(ErrorKind::NotFlat, "loop holonomy " + std::to_string(hol) + " exceeds tolerance");
  std::vector<DevelopedPoint> out;
  for (const auto& x : targets) {
    if (x.size() != x0.size()) throw Error(ErrorKind::DimensionMismatch, "target of wrong dimension");
    const CartanFrame straight = cartan_transport(spec, {x0, x});
    std::vector<std::vector<double>> stairs{x0};
    std::vector<double> p = x0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      p[i] = x[i];
      stairs.push_back(p);
    }
    const CartanFrame other = cartan_transport(spec, stairs);
    DevelopedPoint d;
    d.target = x;
    d.image = ProjectivePoint::from(straight.phi.col(0));
    d.path_error = d.image.distance(ProjectivePoint::from(other.phi.col(0)));
    out.push_back(std::move(d));
  }
  return out;
}

ConnectionSpec model_connection(std::size_t n) {
  return ConnectionSpec::from_christoffel(n, std::vector<std::optional<Expr>>(n * n * n));
}

ConnectionSpec model_metric(std::size_t n) {
  std::string r2 = "1";
  for (std::size_t i = 1; i <= n; ++i) r2 += "+x" + std::to_string(i) + "^2";
  const Expr f = parse("4/(" + r2 + ")^2", n);
  std::vector<std::optional<Expr>> table(n * n);
  for (std::size_t i = 0; i < n; ++i) table[i * n + i] = f;
  return ConnectionSpec::from_metric(n, std::move(table));
}

std::vector<std::vector<double>> geodesic_trace(const ConnectionSpec& spec, const std::vector<double>& x0,
                                                const std::vector<double>& v0, double t_end,
                                                std::size_t steps) {
  const std::size_t n = spec.dim();
  if (x0.size() != n || v0.size() != n) throw Error(ErrorKind::DimensionMismatch, "initial data of wrong dimension");
  if (steps == 0) throw Error(ErrorKind::ContractViolation, "steps must be positive");
  auto accel = [&](const VectorXd& x, const VectorXd& v) -> VectorXd {
    const std::vector<double> p = as_std(x);
    if (!spec.in_domain(p)) throw Error(ErrorKind::LeftDomain, "geodesic left the chart domain box");
    ConnectionValue cv;
    try {
      cv = evaluate(spec, p, Derivatives::None);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DomainError || e.kind() == ErrorKind::SingularMetric) {
        throw Error(ErrorKind::LeftDomain, e.detail());
      }
      throw;
    }
    VectorXd a = VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(k) -= cv.gamma_at(k, i, j) * v(i) * v(j);
    return a;
  };
  const double h = t_end / static_cast<double>(steps);
  VectorXd x = as_vector(x0), v = as_vector(v0);
  std::vector<std::vector<double>> out{x0};
  accel(x, v);
  for (std::size_t s = 0; s < steps; ++s) {
    const VectorXd k1x = v, k1v = accel(x, v);
    const VectorXd k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const VectorXd k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const VectorXd k4x = v + h * k3v, k4v = accel(x + h * k3x, v + h * k3v);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!spec.in_domain(as_std(x))) throw Error(ErrorKind::LeftDomain, "geodesic left the chart domain box");
    out.push_back(as_std(x));
  }
  return out;
}

void to_json(nlohmann::json& j, const DevelopedPoint& d) {
  j = nlohmann::json::object();
  j["target"] = d.target;
  j["homogeneous"] = as_std(d.image.homogeneous);
  j["path_error"] = d.path_error;
}

}  // namespace projgeom
