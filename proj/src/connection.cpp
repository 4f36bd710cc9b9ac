#include "projgeom/connection.hpp"

#include <Eigen/Dense>
#include <string>

#include "projgeom/error.hpp"

namespace projgeom {

OneFormField OneFormField::zero(std::size_t dim) {
  return OneFormField{dim, std::vector<Expr>(dim, Expr::number(0.0))};
}

std::vector<double> OneFormField::evaluate(std::span<const double> p) const {
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = eval(components[i], p);
  return out;
}

// ---------------------------------------------------------------------------
// ConnectionSpec
// ---------------------------------------------------------------------------

namespace {

void check_arity(const std::optional<Expr>& e, std::size_t dim) {
  if (e && e->arity() > dim) {
    throw Error(ErrorKind::UnknownVariable, "entry uses a coordinate beyond the chart dimension");
  }
}

}  // namespace

ConnectionSpec ConnectionSpec::from_christoffel(std::size_t dim,
                                                std::vector<std::optional<Expr>> table) {
  if (dim < 2) throw Error(ErrorKind::DimensionMismatch, "chart dimension must be at least 2");
  if (table.size() != dim * dim * dim) {
    throw Error(ErrorKind::DimensionMismatch, "Christoffel table needs n^3 entries");
  }
  for (const auto& e : table) check_arity(e, dim);
  ConnectionSpec s;
  s.dim_ = dim;
  s.source_ = Source::Christoffel;
  s.table_ = std::move(table);
  return s;
}

ConnectionSpec ConnectionSpec::from_metric(std::size_t dim, std::vector<std::optional<Expr>> table) {
  if (dim < 2) throw Error(ErrorKind::DimensionMismatch, "chart dimension must be at least 2");
  if (table.size() != dim * dim) {
    throw Error(ErrorKind::DimensionMismatch, "metric table needs n^2 entries");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) table[i * dim + j] = table[j * dim + i];
  }
  for (const auto& e : table) check_arity(e, dim);
  ConnectionSpec s;
  s.dim_ = dim;
  s.source_ = Source::Metric;
  s.table_ = std::move(table);
  return s;
}

const std::optional<Expr>& ConnectionSpec::christoffel(std::size_t k, std::size_t i,
                                                       std::size_t j) const {
  if (source_ != Source::Christoffel) {
    throw Error(ErrorKind::ContractViolation, "spec is metric-sourced");
  }
  return table_[(k * dim_ + i) * dim_ + j];
}

const std::optional<Expr>& ConnectionSpec::metric(std::size_t i, std::size_t j) const {
  if (source_ != Source::Metric) {
    throw Error(ErrorKind::ContractViolation, "spec is Christoffel-sourced");
  }
  return table_[i * dim_ + j];
}

ConnectionSpec ConnectionSpec::with_shift(OneFormField alpha) const {
  if (alpha.dim != dim_ || alpha.components.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch, "1-form dimension differs from chart dimension");
  }
  ConnectionSpec s = *this;
  s.shifts_.push_back(std::move(alpha));
  return s;
}

ConnectionSpec ConnectionSpec::with_domain(double lo, double hi) const {
  ConnectionSpec s = *this;
  s.domain_ = std::make_pair(lo, hi);
  return s;
}

bool ConnectionSpec::in_domain(std::span<const double> p) const {
  if (p.size() != dim_) return false;
  if (!domain_) return true;
  for (double x : p) {
    if (x < domain_->first || x > domain_->second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ConnectionValue
// ---------------------------------------------------------------------------

ConnectionValue::ConnectionValue(std::size_t n, std::vector<double> p, Derivatives d)
    : dim(n), point(std::move(p)), derivs(d), gamma(n * n * n, 0.0) {
  if (has_first()) dgamma.assign(n * n * n * n, 0.0);
  if (has_second()) ddgamma.assign(n * n * n * n * n, 0.0);
}

ConnectionValue& ConnectionValue::operator+=(const ConnectionValue& other) {
  if (other.dim != dim || other.derivs < derivs) {
    throw Error(ErrorKind::DimensionMismatch, "incompatible connection values");
  }
  for (std::size_t a = 0; a < gamma.size(); ++a) gamma[a] += other.gamma[a];
  for (std::size_t a = 0; a < dgamma.size(); ++a) dgamma[a] += other.dgamma[a];
  for (std::size_t a = 0; a < ddgamma.size(); ++a) ddgamma[a] += other.ddgamma[a];
  return *this;
}

ConnectionValue& ConnectionValue::operator-=(const ConnectionValue& other) {
  if (other.dim != dim || other.derivs < derivs) {
    throw Error(ErrorKind::DimensionMismatch, "incompatible connection values");
  }
  for (std::size_t a = 0; a < gamma.size(); ++a) gamma[a] -= other.gamma[a];
  for (std::size_t a = 0; a < dgamma.size(); ++a) dgamma[a] -= other.dgamma[a];
  for (std::size_t a = 0; a < ddgamma.size(); ++a) ddgamma[a] -= other.ddgamma[a];
  return *this;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

using JetMatrix = std::vector<Jet3>;  // row-major n×n

void store_jet(ConnectionValue& cv, std::size_t k, std::size_t i, std::size_t j, const Jet3& jet) {
  const std::size_t n = cv.dim;
  cv.gamma_at(k, i, j) = jet.value();
  if (cv.has_first()) {
    for (std::size_t l = 0; l < n; ++l) cv.dgamma_at(k, i, j, l) = jet.d1(l);
  }
  if (cv.has_second()) {
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) cv.ddgamma_at(k, i, j, l, m) = jet.d2(l, m);
  }
}

void add_jet(ConnectionValue& cv, std::size_t k, std::size_t i, std::size_t j, const Jet3& jet) {
  const std::size_t n = cv.dim;
  cv.gamma_at(k, i, j) += jet.value();
  if (cv.has_first()) {
    for (std::size_t l = 0; l < n; ++l) cv.dgamma_at(k, i, j, l) += jet.d1(l);
  }
  if (cv.has_second()) {
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) cv.ddgamma_at(k, i, j, l, m) += jet.d2(l, m);
  }
}

void check_point(const ConnectionSpec& spec, std::span<const double> p) {
  if (p.size() != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(p.size()) +
                                                  " coordinates, chart dimension is " +
                                                  std::to_string(spec.dim()));
  }
  if (!spec.in_domain(p)) throw Error(ErrorKind::DomainError, "point outside the chart domain box");
}

JetMatrix metric_jets(const ConnectionSpec& spec, std::span<const double> p, int order) {
  const std::size_t n = spec.dim();
  JetMatrix g(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto& e = spec.metric(i, j);
      g[i * n + j] = e ? eval_jet(*e, p, order) : Jet3::constant(n, order, 0.0);
      g[j * n + i] = g[i * n + j];
    }
  }
  return g;
}

Eigen::MatrixXd values_of(const JetMatrix& m, std::size_t n) {
  Eigen::MatrixXd v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = m[i * n + j].value();
  return v;
}

constexpr double kMaxMetricCondition = 1e12;

// (HG)^{-1} H with HG = I − E and E nilpotent in the jet sense:
// G^{-1} = (I + E + E² + E³) H exactly up to third order.
JetMatrix invert_jet_matrix(const JetMatrix& g, std::size_t n) {
  const Eigen::MatrixXd g0 = values_of(g, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g0);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kMaxMetricCondition)) {
    throw Error(ErrorKind::SingularMetric,
                "metric condition estimate " + std::to_string(1.0 / rcond) + " exceeds 1e12");
  }
  const Eigen::MatrixXd h = lu.inverse();
  const std::size_t dim = g.front().dim();
  const int order = g.front().order();

  auto mul = [&](const JetMatrix& a, const JetMatrix& b) {
    JetMatrix c(n * n, Jet3::constant(dim, order, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) c[i * n + j] += a[i * n + k] * b[k * n + j];
    return c;
  };

  JetMatrix e(n * n);
  JetMatrix hj(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      hj[i * n + j] = Jet3::constant(dim, order, h(i, j));
      Jet3 acc = Jet3::constant(dim, order, i == j ? 1.0 : 0.0);
      for (std::size_t k = 0; k < n; ++k) acc -= h(i, k) * g[k * n + j];
      e[i * n + j] = acc;
    }
  }
  JetMatrix series(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      series[i * n + j] = Jet3::constant(dim, order, i == j ? 1.0 : 0.0) + e[i * n + j];
  JetMatrix power = e;
  for (int k = 2; k <= order; ++k) {
    power = mul(power, e);
    for (std::size_t a = 0; a < n * n; ++a) series[a] += power[a];
  }
  return mul(series, hj);
}

void apply_shifts(const ConnectionSpec& spec, std::span<const double> p, ConnectionValue& cv) {
  const std::size_t n = spec.dim();
  const int order = static_cast<int>(cv.derivs);
  for (const OneFormField& alpha : spec.shifts()) {
    std::vector<Jet3> a;
    a.reserve(n);
    for (const Expr& e : alpha.components) a.push_back(eval_jet(e, p, order));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        // α_i δ^k_j with i = k-free index, and α_j δ^k_i.
        add_jet(cv, k, j, k, a[j]);
        add_jet(cv, k, k, j, a[j]);
      }
    }
  }
}

}  // namespace

ConnectionValue levi_civita(const ConnectionSpec& spec, std::span<const double> p,
                            Derivatives derivs) {
  if (spec.source() != ConnectionSpec::Source::Metric) {
    throw Error(ErrorKind::ContractViolation, "levi_civita needs a metric-sourced spec");
  }
  check_point(spec, p);
  const std::size_t n = spec.dim();
  const int order = static_cast<int>(derivs);
  const JetMatrix g = metric_jets(spec, p, order + 1);

  // dg[(a*n + b)*n + c] = ∂_a g_{bc}
  std::vector<Jet3> dg(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) dg[(a * n + b) * n + c] = g[b * n + c].derivative(a);

  JetMatrix gt(n * n);
  for (std::size_t a = 0; a < n * n; ++a) gt[a] = g[a].truncated(order);
  const JetMatrix ginv = invert_jet_matrix(gt, n);

  ConnectionValue cv(n, std::vector<double>(p.begin(), p.end()), derivs);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        Jet3 sum = Jet3::constant(n, order, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
          sum += ginv[k * n + l] *
                 (dg[(i * n + j) * n + l] + dg[(j * n + i) * n + l] - dg[(l * n + i) * n + j]);
        }
        sum *= 0.5;
        store_jet(cv, k, i, j, sum);
        store_jet(cv, k, j, i, sum);
      }
    }
  }
  return cv;
}

ConnectionValue evaluate(const ConnectionSpec& spec, std::span<const double> p,
                         Derivatives derivs) {
  check_point(spec, p);
  const std::size_t n = spec.dim();
  ConnectionValue cv;
  if (spec.source() == ConnectionSpec::Source::Metric) {
    cv = levi_civita(spec, p, derivs);
  } else {
    cv = ConnectionValue(n, std::vector<double>(p.begin(), p.end()), derivs);
    const int order = static_cast<int>(derivs);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (const auto& e = spec.christoffel(k, i, j)) store_jet(cv, k, i, j, eval_jet(*e, p, order));
  }
  apply_shifts(spec, p, cv);
  return cv;
}

std::vector<double> metric_at(const ConnectionSpec& spec, std::span<const double> p) {
  check_point(spec, p);
  const std::size_t n = spec.dim();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (const auto& e = spec.metric(i, j)) g[i * n + j] = eval(*e, p);
  return g;
}

// ---------------------------------------------------------------------------
// Curvature kernels
// ---------------------------------------------------------------------------

namespace {

const std::vector<Slot> kCurvatureVariance{Slot::Up, Slot::Down, Slot::Down, Slot::Down};

void require_curvature(const TensorValue& R) {
  if (R.variance() != kCurvatureVariance) {
    throw Error(ErrorKind::VarianceMismatch, "expected a (up, down, down, down) curvature tensor");
  }
}

}  // namespace

TensorValue torsion(const ConnectionValue& cv) {
  const std::size_t n = cv.dim;
  TensorValue t(n, {Slot::Up, Slot::Down, Slot::Down});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t({k, i, j}) = cv.gamma_at(k, i, j) - cv.gamma_at(k, j, i);
  return t;
}

TensorValue curvature(const ConnectionValue& cv) {
  if (!cv.has_first()) throw Error(ErrorKind::MissingJet, "curvature needs first derivatives of Γ");
  const std::size_t n = cv.dim;
  TensorValue R(n, kCurvatureVariance);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double v = cv.dgamma_at(l, j, k, i) - cv.dgamma_at(l, i, k, j);
          for (std::size_t m = 0; m < n; ++m) {
            v += cv.gamma_at(l, i, m) * cv.gamma_at(m, j, k) - cv.gamma_at(l, j, m) * cv.gamma_at(m, i, k);
          }
          R({l, k, i, j}) = v;
        }
      }
    }
  }
  return R;
}

TensorValue curvature_derivative(const ConnectionValue& cv) {
  if (!cv.has_second()) {
    throw Error(ErrorKind::MissingJet, "curvature derivative needs second derivatives of Γ");
  }
  const std::size_t n = cv.dim;
  TensorValue dR(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t p = 0; p < n; ++p) {
            double v = cv.ddgamma_at(l, j, k, i, p) - cv.ddgamma_at(l, i, k, j, p);
            for (std::size_t m = 0; m < n; ++m) {
              v += cv.dgamma_at(l, i, m, p) * cv.gamma_at(m, j, k) +
                   cv.gamma_at(l, i, m) * cv.dgamma_at(m, j, k, p) -
                   cv.dgamma_at(l, j, m, p) * cv.gamma_at(m, i, k) -
                   cv.gamma_at(l, j, m) * cv.dgamma_at(m, i, k, p);
            }
            dR({l, k, i, j, p}) = v;
          }
        }
      }
    }
  }
  return dR;
}

TensorValue covariant_curvature_derivative(const ConnectionValue& cv) {
  const TensorValue R = curvature(cv);
  TensorValue D = curvature_derivative(cv);
  const std::size_t n = cv.dim;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t p = 0; p < n; ++p) {
            double v = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
              v += cv.gamma_at(l, p, m) * R({m, k, i, j}) - cv.gamma_at(m, p, k) * R({l, m, i, j}) -
                   cv.gamma_at(m, p, i) * R({l, k, m, j}) - cv.gamma_at(m, p, j) * R({l, k, i, m});
            }
            D({l, k, i, j, p}) += v;
          }
        }
      }
    }
  }
  return D;
}

TensorValue ricci(const TensorValue& R) {
  require_curvature(R);
  const std::size_t n = R.dim();
  TensorValue r(n, {Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t m = 0; m < n; ++m) v += R({m, j, i, m});
      r({i, j}) = v;
    }
  }
  return r;
}

TensorValue trace2form(const TensorValue& R) {
  require_curvature(R);
  const std::size_t n = R.dim();
  TensorValue s(n, {Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += R({k, k, i, j});
      s({i, j}) = v;
    }
  }
  return s;
}

TensorValue first_bianchi(const TensorValue& R) {
  require_curvature(R);
  const std::size_t n = R.dim();
  TensorValue B(n, kCurvatureVariance);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          B({l, k, i, j}) = R({l, k, i, j}) + R({l, i, j, k}) + R({l, j, k, i});
  return B;
}

TensorValue second_bianchi(const ConnectionValue& cv) {
  const TensorValue R = curvature(cv);
  const TensorValue DR = covariant_curvature_derivative(cv);
  const TensorValue T = torsion(cv);
  const std::size_t n = cv.dim;
  TensorValue S(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          for (std::size_t z = 0; z < n; ++z) {
            double v = DR({l, k, y, z, x}) + DR({l, k, z, x, y}) + DR({l, k, x, y, z});
            for (std::size_t m = 0; m < n; ++m) {
              v += T({m, x, y}) * R({l, k, m, z}) + T({m, y, z}) * R({l, k, m, x}) +
                   T({m, z, x}) * R({l, k, m, y});
            }
            S({l, k, x, y, z}) = v;
          }
        }
      }
    }
  }
  return S;
}

TensorValue metricity_defect(const ConnectionSpec& spec, std::span<const double> p) {
  const std::size_t n = spec.dim();
  const JetMatrix g = metric_jets(spec, p, 1);
  const ConnectionValue cv = evaluate(spec, p, Derivatives::None);
  TensorValue d(n, {Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double v = g[i * n + j].d1(l);
        for (std::size_t m = 0; m < n; ++m) {
          v -= cv.gamma_at(m, l, i) * g[m * n + j].value() + cv.gamma_at(m, l, j) * g[i * n + m].value();
        }
        d({l, i, j}) = v;
      }
    }
  }
  return d;
}

}  // namespace projgeom
