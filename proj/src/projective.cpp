#include "projgeom/projective.hpp"

#include <cmath>
#include <complex>

#include "projgeom/algebra.hpp"
#include "projgeom/error.hpp"

namespace projgeom {

namespace {

constexpr double kTorsionTol = 1e-10;

bool is_zero(const Expr& e) { return e.kind() == Expr::Kind::Number && e.number_value() == 0.0; }

void accumulate(std::optional<Expr>& slot, const Expr& term) {
  if (is_zero(term)) return;
  slot = slot ? *slot + term : term;
}

void require_torsion_free(const ConnectionValue& cv) {
  const double t = norm(torsion(cv));
  if (t > kTorsionTol) throw Error(ErrorKind::HasTorsion, "torsion norm " + std::to_string(t));
}

TensorValue difference(const ConnectionValue& a, const ConnectionValue& b) {
  const std::size_t n = a.dim;
  TensorValue A(n, {Slot::Up, Slot::Down, Slot::Down});
  for (std::size_t x = 0; x < A.data().size(); ++x) A.data()[x] = b.gamma[x] - a.gamma[x];
  return A;
}

bool near_threshold(double r, double tol) { return r >= 0.1 * tol && r <= 10.0 * tol; }

}  // namespace

ConnectionSpec projective_change(const ConnectionSpec& spec, const OneFormField& alpha) {
  const std::size_t n = spec.dim();
  if (alpha.dim != n || alpha.components.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "1-form dimension differs from chart dimension");
  }
  if (spec.source() == ConnectionSpec::Source::Metric) return spec.with_shift(alpha);

  std::vector<std::optional<Expr>> table(n * n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto& slot = table[(k * n + i) * n + j];
        slot = spec.christoffel(k, i, j);
        if (j == k) accumulate(slot, alpha.components[i]);
        if (i == k) accumulate(slot, alpha.components[j]);
      }
    }
  }
  ConnectionSpec out = ConnectionSpec::from_christoffel(n, std::move(table));
  for (const OneFormField& s : spec.shifts()) out = out.with_shift(s);
  if (spec.domain()) out = out.with_domain(spec.domain()->first, spec.domain()->second);
  return out;
}

InvarianceResult check_weyl_invariance(const ConnectionSpec& spec, const OneFormField& alpha,
                                       const std::vector<std::vector<double>>& points) {
  const ConnectionSpec changed = projective_change(spec, alpha);
  const bool two = spec.dim() == 2;
  const Derivatives d = two ? Derivatives::Second : Derivatives::First;
  InvarianceResult res;
  if (two) res.cotton_residual = 0.0;
  for (const auto& p : points) {
    const ConnectionValue a = evaluate(spec, p, d);
    const ConnectionValue b = evaluate(changed, p, d);
    require_torsion_free(a);
    const TensorValue wa = weyl(curvature(a)).W;
    const TensorValue wb = weyl(curvature(b)).W;
    res.weyl_residual = std::max(res.weyl_residual, norm(wb - wa));
    if (two) res.cotton_residual = std::max(*res.cotton_residual, norm(cotton(b) - cotton(a)));
  }
  return res;
}

EquivalenceVerdict projectively_equivalent(const ConnectionSpec& a, const ConnectionSpec& b,
                                           const std::vector<std::vector<double>>& points,
                                           double tol) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "charts of different dimension");
  const std::size_t n = a.dim();
  EquivalenceVerdict v;
  for (const auto& p : points) {
    const ConnectionValue ca = evaluate(a, p, Derivatives::None);
    const ConnectionValue cb = evaluate(b, p, Derivatives::None);
    require_torsion_free(ca);
    require_torsion_free(cb);
    const TensorValue A = difference(ca, cb);
    std::vector<double> alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) alpha[i] += A({k, i, k});
      alpha[i] /= static_cast<double>(n) + 1.0;
    }
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double model = (j == k ? alpha[i] : 0.0) + (i == k ? alpha[j] : 0.0);
          r = std::max(r, std::abs(A({k, i, j}) - model));
        }
    v.alphas.push_back(alpha);
    if (!v.witness || r > v.max_residual) v.witness = Witness{p, std::nullopt, r};
    v.max_residual = std::max(v.max_residual, r);
  }
  v.equivalent = v.max_residual <= tol;
  v.marginal = near_threshold(v.max_residual, tol);
  if (v.equivalent) v.witness.reset();
  return v;
}

double twistor_component(const TensorValue& A, const Eigen::MatrixXd& j) {
  using C = std::complex<double>;
  const std::size_t n = A.dim();
  const auto m = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd jc = j.cast<C>();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(m, m);
  const Eigen::MatrixXcd plus = jc + C(0, 1) * I;
  const Eigen::MatrixXcd minus = jc - C(0, 1) * I;
  double worst = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const Eigen::VectorXcd v = minus.col(static_cast<Eigen::Index>(e));
    Eigen::MatrixXcd Av = Eigen::MatrixXcd::Zero(m, m);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj) Av(k, jj) += A({k, i, jj}) * v(i);
    const Eigen::MatrixXcd P = plus * Av * minus;
    worst = std::max(worst, P.cwiseAbs().maxCoeff());
  }
  const double scale = 1.0 + j.cwiseAbs().maxCoeff();
  return worst / (scale * scale * scale);
}

TwistorVerdict same_twistor_structure(const ConnectionSpec& a, const ConnectionSpec& b,
                                      const std::vector<std::vector<double>>& points,
                                      const std::vector<Eigen::MatrixXd>& js, double tol) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "charts of different dimension");
  if (a.dim() % 2 != 0) throw Error(ErrorKind::OddDimension, "twistor space needs even n");
  TwistorVerdict v;
  for (const auto& p : points) {
    const TensorValue A = difference(evaluate(a, p, Derivatives::None), evaluate(b, p, Derivatives::None));
    for (const auto& j : js) {
      const double r = twistor_component(A, j);
      if (!v.witness || r > v.max_residual) v.witness = Witness{p, j, r};
      v.max_residual = std::max(v.max_residual, r);
    }
  }
  v.same = v.max_residual <= tol;
  v.marginal = near_threshold(v.max_residual, tol);
  if (v.same) v.witness.reset();
  return v;
}

TorsionRemoval remove_torsion(const ConnectionSpec& spec,
                              const std::vector<std::vector<double>>& points, double tol) {
  const std::size_t n = spec.dim();
  TorsionRemoval out;
  out.alpha = OneFormField::zero(n);
  if (spec.source() == ConnectionSpec::Source::Metric) {
    out.ok = true;
    out.spec = spec;
    return out;
  }
  for (const auto& p : points) {
    const TorsionParts tp = torsion_split(torsion(evaluate(spec, p, Derivatives::None)));
    out.t1_norm = std::max(out.t1_norm, norm(tp.T1));
  }
  if (out.t1_norm > tol) return out;

  const double scale = 1.0 / (static_cast<double>(n) - 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<Expr> sum;
    for (std::size_t k = 0; k < n; ++k) {
      if (const auto& g = spec.christoffel(k, j, k)) sum = sum ? *sum + *g : *g;
      if (const auto& g = spec.christoffel(k, k, j)) sum = sum ? *sum - *g : -*g;
    }
    if (sum) out.alpha.components[j] = Expr::number(scale) * *sum;
  }

  std::vector<std::optional<Expr>> table(n * n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto& slot = table[(k * n + i) * n + j];
        slot = spec.christoffel(k, i, j);
        if (j == k) accumulate(slot, Expr::number(-0.5) * out.alpha.components[i]);
        if (i == k) accumulate(slot, Expr::number(0.5) * out.alpha.components[j]);
      }
    }
  }
  ConnectionSpec fixed = ConnectionSpec::from_christoffel(n, std::move(table));
  for (const OneFormField& s : spec.shifts()) fixed = fixed.with_shift(s);
  if (spec.domain()) fixed = fixed.with_domain(spec.domain()->first, spec.domain()->second);
  for (const auto& p : points) {
    out.residual_torsion = std::max(out.residual_torsion, norm(torsion(evaluate(fixed, p, Derivatives::None))));
  }
  out.ok = out.residual_torsion <= tol;
  out.spec = std::move(fixed);
  return out;
}

void to_json(nlohmann::json& j, const Witness& w) {
  j = nlohmann::json::object();
  j["point"] = w.point;
  if (w.j) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < w.j->rows(); ++r) {
      std::vector<double> row(w.j->cols());
      for (Eigen::Index c = 0; c < w.j->cols(); ++c) row[c] = (*w.j)(r, c);
      rows.push_back(row);
    }
    j["j"] = rows;
  }
  j["residual"] = w.residual;
}

}  // namespace projgeom
