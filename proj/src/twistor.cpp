#include "projgeom/twistor.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "projgeom/error.hpp"
#include "projgeom/random.hpp"

namespace projgeom {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kTorsionTol = 1e-10;

// G(v)^k_m = Γ^k_{im} v^i
MatrixXd gamma_along(const std::vector<double>& gamma, std::size_t n, const VectorXd& v) {
  MatrixXd g = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < n; ++m) g(k, m) += gamma[(k * n + i) * n + m] * v(i);
  return g;
}

VectorXd vec(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

MatrixXd acs_matrix(const std::vector<double>& gamma, std::size_t n, const MatrixXd& j,
                    const std::vector<MatrixXd>& tangents) {
  const std::size_t f = tangents.size();
  MatrixXd D(n * n, f);
  for (std::size_t a = 0; a < f; ++a) D.col(a) = vec(tangents[a]);
  const Eigen::ColPivHouseholderQR<MatrixXd> qr(D);

  MatrixXd J = MatrixXd::Zero(n + f, n + f);
  for (std::size_t i = 0; i < n; ++i) {
    const VectorXd e = VectorXd::Unit(n, i);
    const VectorXd je = j * e;
    const MatrixXd ge = gamma_along(gamma, n, e);
    const MatrixXd gje = gamma_along(gamma, n, je);
    const MatrixXd dj = j * (ge * j - j * ge) - (gje * j - j * gje);
    J.block(0, i, n, 1) = je;
    J.block(n, i, f, 1) = qr.solve(vec(dj));
  }
  for (std::size_t a = 0; a < f; ++a) J.block(n, n + a, f, 1) = qr.solve(vec(j * tangents[a]));
  return J;
}

void require_torsion_free(const ConnectionSpec& spec, const std::vector<double>& x) {
  const double t = norm(torsion(evaluate(spec, x, Derivatives::None)));
  if (t > kTorsionTol) throw Error(ErrorKind::HasTorsion, "torsion norm " + std::to_string(t));
}

}  // namespace

MatrixXd standard_j(std::size_t n) {
  if (n % 2 != 0) throw Error(ErrorKind::OddDimension, "complex structures need even n");
  MatrixXd j = MatrixXd::Zero(n, n);
  for (std::size_t b = 0; b < n; b += 2) {
    j(b + 1, b) = 1.0;
    j(b, b + 1) = -1.0;
  }
  return j;
}

std::vector<MatrixXd> sample_complex_structures(std::size_t n, std::size_t count, std::uint64_t seed) {
  const MatrixXd j0 = standard_j(n);
  Rng rng(seed);
  std::vector<MatrixXd> out;
  while (out.size() < count) {
    MatrixXd g(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) g(a, b) = rng.uniform(-1.0, 1.0);
    const Eigen::JacobiSVD<MatrixXd> svd(g);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e6) continue;
    out.push_back(g * j0 * g.inverse());
  }
  return out;
}

std::vector<TwistorPoint> sample_twistor_points(const std::vector<std::vector<double>>& xs,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TwistorPoint> out;
  for (const auto& x : xs) {
    const std::size_t n = x.size();
    const MatrixXd j0 = standard_j(n);
    while (true) {
      MatrixXd g = MatrixXd::Identity(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) g(a, b) += 0.5 * rng.uniform(-1.0, 1.0);
      const Eigen::JacobiSVD<MatrixXd> svd(g);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 10.0) continue;
      out.push_back({x, g * j0 * g.inverse()});
      break;
    }
  }
  return out;
}

std::vector<MatrixXd> anticommutant_basis(const MatrixXd& j) {
  const auto n = j.rows();
  MatrixXd L(n * n, n * n);
  for (Eigen::Index c = 0; c < n * n; ++c) {
    MatrixXd e = MatrixXd::Zero(n, n);
    e(c % n, c / n) = 1.0;
    L.col(c) = vec(e * j + j * e);
  }
  const Eigen::JacobiSVD<MatrixXd> svd(L, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv(0));
  std::vector<MatrixXd> basis;
  for (Eigen::Index c = 0; c < n * n; ++c) {
    if (sv(c) <= cut) basis.push_back(Eigen::Map<const MatrixXd>(svd.matrixV().col(c).data(), n, n));
  }
  return basis;
}

void check_complex_structure(const MatrixXd& j) {
  if (j.rows() != j.cols()) throw Error(ErrorKind::NotAlmostComplex, "j is not square");
  const auto n = j.rows();
  const double scale = 1.0 + j.cwiseAbs().maxCoeff();
  const double res = (j * j + MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (res > 1e-12 * scale * scale) {
    throw Error(ErrorKind::NotAlmostComplex, "|j^2 + I| = " + std::to_string(res));
  }
}

TwistorChart::TwistorChart(const ConnectionSpec& spec, const TwistorPoint& anchor)
    : spec_(spec), n_(spec.dim()), j0_(anchor.j) {
  if (n_ % 2 != 0) throw Error(ErrorKind::OddDimension, "twistor space needs even n");
  if (anchor.x.size() != n_ || static_cast<std::size_t>(anchor.j.rows()) != n_) {
    throw Error(ErrorKind::DimensionMismatch, "twistor point does not match chart dimension");
  }
  check_complex_structure(j0_);
  basis_ = anticommutant_basis(j0_);
  origin_ = VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < n_; ++i) origin_(i) = anchor.x[i];
}

VectorXd TwistorChart::origin() const { return origin_; }

MatrixXd TwistorChart::j_at(const VectorXd& y) const {
  MatrixXd M = MatrixXd::Zero(n_, n_);
  for (std::size_t a = 0; a < basis_.size(); ++a) M += y(n_ + a) * basis_[a];
  return MatrixXd((2.0 * M).exp()) * j0_;
}

std::vector<MatrixXd> TwistorChart::fibre_tangents(const VectorXd& y) const {
  const auto n = static_cast<Eigen::Index>(n_);
  MatrixXd M = MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < basis_.size(); ++a) M += y(n + a) * basis_[a];
  std::vector<MatrixXd> out;
  out.reserve(basis_.size());
  MatrixXd B = MatrixXd::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = 2.0 * M;
  B.bottomRightCorner(n, n) = 2.0 * M;
  for (const MatrixXd& m : basis_) {
    B.topRightCorner(n, n) = 2.0 * m;
    const MatrixXd E = B.exp();
    out.push_back(E.topRightCorner(n, n) * j0_);
  }
  return out;
}

MatrixXd TwistorChart::acs(const VectorXd& y) const {
  std::vector<double> x(y.data(), y.data() + n_);
  const ConnectionValue cv = evaluate(spec_, x, Derivatives::None);
  return acs_matrix(cv.gamma, n_, j_at(y), fibre_tangents(y));
}

MatrixXd twistor_acs(const ConnectionValue& cv, const TwistorPoint& tp) {
  const std::size_t n = cv.dim;
  if (n % 2 != 0) throw Error(ErrorKind::OddDimension, "twistor space needs even n");
  if (static_cast<std::size_t>(tp.j.rows()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "j does not match connection dimension");
  }
  check_complex_structure(tp.j);
  const std::vector<MatrixXd> basis = anticommutant_basis(tp.j);
  std::vector<MatrixXd> tangents;
  tangents.reserve(basis.size());
  for (const MatrixXd& m : basis) tangents.push_back(2.0 * m * tp.j);
  return acs_matrix(cv.gamma, n, tp.j, tangents);
}

VectorXd nijenhuis_fields(const TwistorChart& chart, const VectorXd& y, const VectorField& U,
                          const VectorField& V, double h) {
  const VectorField JU = [&](const VectorXd& z) -> VectorXd { return chart.acs(z) * U(z); };
  const VectorField JV = [&](const VectorXd& z) -> VectorXd { return chart.acs(z) * V(z); };
  auto derivative = [&](const VectorField& B, const VectorXd& along) -> VectorXd {
    return (B(y + h * along) - B(y - h * along)) / (2.0 * h);
  };
  auto lie = [&](const VectorField& A, const VectorField& B) -> VectorXd {
    return derivative(B, A(y)) - derivative(A, B(y));
  };
  const MatrixXd J = chart.acs(y);
  return lie(JU, JV) - lie(U, V) - J * lie(JU, V) - J * lie(U, JV);
}

double nijenhuis(const ConnectionSpec& spec, const TwistorPoint& tp,
                 const std::vector<std::pair<VectorXd, VectorXd>>& pairs, double h) {
  require_torsion_free(spec, tp.x);
  const TwistorChart chart(spec, tp);
  const VectorXd y = chart.origin();
  std::vector<std::pair<VectorXd, VectorXd>> todo = pairs;
  if (todo.empty()) {
    const auto d = static_cast<Eigen::Index>(chart.dim());
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = a + 1; b < d; ++b) todo.emplace_back(VectorXd::Unit(d, a), VectorXd::Unit(d, b));
  }
  double worst = 0.0;
  for (const auto& [u, v] : todo) {
    const VectorField U = [u = u](const VectorXd&) { return u; };
    const VectorField V = [v = v](const VectorXd&) { return v; };
    // Richardson step on the central scheme: h² terms cancel
    const VectorXd coarse = nijenhuis_fields(chart, y, U, V, h);
    const VectorXd fine = nijenhuis_fields(chart, y, U, V, 0.5 * h);
    worst = std::max(worst, ((4.0 * fine - coarse) / 3.0).cwiseAbs().maxCoeff());
  }
  return worst;
}

Integrability classify_nijenhuis(double residual) {
  if (residual <= 1e-5) return Integrability::Integrable;
  if (residual >= 1e-2) return Integrability::Obstruction;
  return Integrability::Inconclusive;
}

std::string to_string(Integrability v) {
  switch (v) {
    case Integrability::Integrable: return "integrable";
    case Integrability::Obstruction: return "obstruction";
    case Integrability::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace projgeom
