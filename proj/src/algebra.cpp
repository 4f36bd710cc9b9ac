#include "projgeom/algebra.hpp"

#include <array>
#include <cmath>

#include "projgeom/error.hpp"

namespace projgeom {

namespace {

const std::vector<Slot> kCurv{Slot::Up, Slot::Down, Slot::Down, Slot::Down};

Eigen::MatrixXd x_wedge_alpha(const Eigen::VectorXd& x, const Eigen::RowVectorXd& a) {
  // [X,α]Y = α(X)Y + α(Y)X
  const auto n = x.size();
  return a.dot(x) * Eigen::MatrixXd::Identity(n, n) + x * a;
}

void check_torsion_free(const ConnectionValue& cv, double tol) {
  const double t = norm(torsion(cv));
  if (t > tol) throw Error(ErrorKind::HasTorsion, "torsion norm " + std::to_string(t));
}

// ∂_p Q_{ij} at slots (i, j, p).
TensorValue projective_q_derivative(const ConnectionValue& cv) {
  const std::size_t n = cv.dim;
  const TensorValue dR = curvature_derivative(cv);
  TensorValue dr(n, {Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < n; ++p) {
        double v = 0.0;
        for (std::size_t m = 0; m < n; ++m) v += dR({m, j, i, m, p});
        dr({i, j, p}) = v;
      }
  const double nn = static_cast<double>(n);
  TensorValue dQ(n, {Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < n; ++p) {
        const double sym = 0.5 * (dr({i, j, p}) + dr({j, i, p}));
        const double alt = 0.5 * (dr({i, j, p}) - dr({j, i, p}));
        dQ({i, j, p}) = sym / (nn - 1.0) + alt / (nn + 1.0);
      }
  return dQ;
}

TensorValue q_from_ricci(const TensorValue& r) {
  const double n = static_cast<double>(r.dim());
  return sym2(r, 0, 1) * (1.0 / (n - 1.0)) + alt2(r, 0, 1) * (1.0 / (n + 1.0));
}

}  // namespace

AlgebraElement AlgebraElement::zero(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return {Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m), Eigen::RowVectorXd::Zero(m)};
}

AlgebraElement AlgebraElement::vector(const Eigen::VectorXd& x) {
  AlgebraElement e = zero(static_cast<std::size_t>(x.size()));
  e.X = x;
  return e;
}

AlgebraElement AlgebraElement::endo(const Eigen::MatrixXd& a) {
  AlgebraElement e = zero(static_cast<std::size_t>(a.rows()));
  e.A = a;
  return e;
}

AlgebraElement AlgebraElement::covector(const Eigen::RowVectorXd& a) {
  AlgebraElement e = zero(static_cast<std::size_t>(a.size()));
  e.alpha = a;
  return e;
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  const auto n = a.X.size();
  if (b.X.size() != n || a.A.rows() != n || a.A.cols() != n || b.A.rows() != n ||
      b.A.cols() != n || a.alpha.size() != n || b.alpha.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "algebra elements of different dimension");
  }
  AlgebraElement c;
  c.X = a.A * b.X - b.A * a.X;
  c.A = a.A * b.A - b.A * a.A + x_wedge_alpha(a.X, b.alpha) - x_wedge_alpha(b.X, a.alpha);
  c.alpha = a.alpha * b.A - b.alpha * a.A;
  return c;
}

double norm(const AlgebraElement& a) {
  double m = 0.0;
  if (a.X.size()) m = std::max(m, a.X.cwiseAbs().maxCoeff());
  if (a.A.size()) m = std::max(m, a.A.cwiseAbs().maxCoeff());
  if (a.alpha.size()) m = std::max(m, a.alpha.cwiseAbs().maxCoeff());
  return m;
}

TensorValue wedge_id(const TensorValue& Q) {
  if (Q.variance() != std::vector<Slot>{Slot::Down, Slot::Down}) {
    throw Error(ErrorKind::VarianceMismatch, "wedge_id expects a (down, down) tensor");
  }
  const std::size_t n = Q.dim();
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd q(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = Q({i, j});

  TensorValue out(n, kCurv);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto qi = AlgebraElement::covector(q.row(i));
      const auto qj = AlgebraElement::covector(q.row(j));
      const auto ei = AlgebraElement::vector(Eigen::VectorXd::Unit(m, i));
      const auto ej = AlgebraElement::vector(Eigen::VectorXd::Unit(m, j));
      const Eigen::MatrixXd e = bracket(qi, ej).A - bracket(qj, ei).A;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k) out({l, k, i, j}) = e(l, k);
    }
  }
  return out;
}

TensorValue cyclic_part(const TensorValue& omega) {
  const std::size_t n = omega.dim();
  TensorValue out(n, omega.variance());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        out({a, b, c}) = (omega({a, b, c}) + omega({b, c, a}) + omega({c, a, b})) / 3.0;
  return out;
}

TensorValue wedge_id_2form(const TensorValue& omega) {
  if (omega.variance() != std::vector<Slot>{Slot::Down, Slot::Down, Slot::Down}) {
    throw Error(ErrorKind::VarianceMismatch, "wedge_id_2form expects a (down, down, down) tensor");
  }
  const std::size_t n = omega.dim();
  const auto m = static_cast<Eigen::Index>(n);
  auto form = [&](std::size_t a, std::size_t b) {
    Eigen::RowVectorXd v(m);
    for (std::size_t c = 0; c < n; ++c) v(c) = omega({a, b, c});
    return AlgebraElement::covector(v);
  };
  auto vec = [&](std::size_t a) { return AlgebraElement::vector(Eigen::VectorXd::Unit(m, a)); };

  TensorValue out(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        const Eigen::MatrixXd e =
            bracket(form(a, b), vec(c)).A + bracket(form(b, c), vec(a)).A + bracket(form(c, a), vec(b)).A;
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t k = 0; k < n; ++k) out({l, k, a, b, c}) = e(l, k);
      }
    }
  }
  return out;
}

WeylParts weyl(const TensorValue& R, double tol) {
  if (R.variance() != kCurv) {
    throw Error(ErrorKind::VarianceMismatch, "weyl expects a curvature tensor");
  }
  const double b = norm(first_bianchi(R));
  if (b > tol) throw Error(ErrorKind::NotBianchi, "first Bianchi residual " + std::to_string(b));
  const double n = static_cast<double>(R.dim());
  const TensorValue r = ricci(R);
  WeylParts out;
  out.Q = q_from_ricci(r);
  out.W = R + wedge_id(out.Q);
  out.F = alt2(r, 0, 1) * (-2.0 / (n + 1.0));
  return out;
}

TorsionParts torsion_split(const TensorValue& T, double tol) {
  if (T.variance() != std::vector<Slot>{Slot::Up, Slot::Down, Slot::Down}) {
    throw Error(ErrorKind::VarianceMismatch, "torsion_split expects an (up, down, down) tensor");
  }
  const std::size_t n = T.dim();
  double asym = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) asym = std::max(asym, std::abs(T({k, i, j}) + T({k, j, i})));
  if (asym > tol * (1.0 + norm(T))) {
    throw Error(ErrorKind::NotAntisymmetric, "symmetric part " + std::to_string(asym));
  }
  TorsionParts out;
  out.alpha.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += T({k, j, k});
    out.alpha[j] = v / (static_cast<double>(n) - 1.0);
  }
  out.T2 = TensorValue(n, T.variance());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.T2({k, i, j}) = (j == k ? out.alpha[i] : 0.0) - (i == k ? out.alpha[j] : 0.0);
  out.T1 = T - out.T2;
  return out;
}

TensorValue projective_q(const ConnectionValue& cv) { return q_from_ricci(ricci(curvature(cv))); }

TensorValue cotton(const ConnectionValue& cv, double torsion_tol) {
  if (!cv.has_second()) throw Error(ErrorKind::MissingJet, "Cotton tensor needs second derivatives of Γ");
  check_torsion_free(cv, torsion_tol);
  const std::size_t n = cv.dim;
  const TensorValue Q = projective_q(cv);
  const TensorValue dQ = projective_q_derivative(cv);
  // ∇_p Q_{ij}
  auto nabla = [&](std::size_t p, std::size_t i, std::size_t j) {
    double v = dQ({i, j, p});
    for (std::size_t m = 0; m < n; ++m) v -= cv.gamma_at(m, p, i) * Q({m, j}) + cv.gamma_at(m, p, j) * Q({i, m});
    return v;
  };
  TensorValue C(n, {Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) C({i, j, k}) = nabla(i, j, k) - nabla(j, i, k);
  return C;
}

std::vector<Eigen::MatrixXd> cartan_connection(const ConnectionValue& cv) {
  const std::size_t n = cv.dim;
  const auto m = static_cast<Eigen::Index>(n);
  const TensorValue Q = projective_q(cv);
  std::vector<Eigen::MatrixXd> A(n, Eigen::MatrixXd::Zero(m + 1, m + 1));
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t k = 0; k < n; ++k) a += cv.gamma_at(k, i, k);
    a /= -(static_cast<double>(n) + 1.0);
    A[i](0, 0) = a;
    A[i](i + 1, 0) = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      A[i](0, j + 1) = Q({i, j});
      for (std::size_t k = 0; k < n; ++k) A[i](k + 1, j + 1) = cv.gamma_at(k, i, j);
      A[i](j + 1, j + 1) += a;
    }
  }
  return A;
}

CartanBlocks cartan_curvature(const ConnectionValue& cv, double torsion_tol) {
  if (!cv.has_second()) throw Error(ErrorKind::MissingJet, "Cartan curvature needs second derivatives of Γ");
  check_torsion_free(cv, torsion_tol);
  const std::size_t n = cv.dim;
  const auto m = static_cast<Eigen::Index>(n);
  const std::vector<Eigen::MatrixXd> A = cartan_connection(cv);
  const TensorValue dQ = projective_q_derivative(cv);

  // dA[p][i] = ∂_p Â_i
  std::vector<std::vector<Eigen::MatrixXd>> dA(n, std::vector<Eigen::MatrixXd>(n));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m + 1, m + 1);
      double da = 0.0;
      for (std::size_t k = 0; k < n; ++k) da += cv.dgamma_at(k, i, k, p);
      da /= -(static_cast<double>(n) + 1.0);
      d(0, 0) = da;
      for (std::size_t j = 0; j < n; ++j) {
        d(0, j + 1) = dQ({i, j, p});
        for (std::size_t k = 0; k < n; ++k) d(k + 1, j + 1) = cv.dgamma_at(k, i, j, p);
        d(j + 1, j + 1) += da;
      }
      dA[p][i] = d;
    }
  }

  CartanBlocks out{TensorValue(n, {Slot::Down, Slot::Down}),
                   TensorValue(n, {Slot::Down, Slot::Down, Slot::Down}),
                   TensorValue(n, {Slot::Up, Slot::Down, Slot::Down}), TensorValue(n, kCurv)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::MatrixXd F = dA[i][j] - dA[j][i] + A[i] * A[j] - A[j] * A[i];
      out.topleft({i, j}) = F(0, 0);
      for (std::size_t k = 0; k < n; ++k) {
        out.topright({i, j, k}) = F(0, k + 1);
        out.bottomleft({k, i, j}) = F(k + 1, 0);
        for (std::size_t l = 0; l < n; ++l) out.bottomright({l, k, i, j}) = F(l + 1, k + 1);
      }
    }
  }
  return out;
}

std::size_t weyl_space_dimension(std::size_t n) {
  std::vector<std::array<std::size_t, 4>> basis;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) basis.push_back({l, k, i, j});
  const std::size_t n4 = n * n * n * n;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(n4 + n * n), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto [l, k, i, j] = basis[c];
    TensorValue R(n, kCurv);
    R({l, k, i, j}) = 1.0;
    R({l, k, j, i}) = -1.0;
    const TensorValue B = first_bianchi(R);
    const TensorValue r = ricci(R);
    for (std::size_t a = 0; a < n4; ++a) M(a, c) = B.data()[a];
    for (std::size_t a = 0; a < n * n; ++a) M(n4 + a, c) = r.data()[a];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-10);
  return basis.size() - static_cast<std::size_t>(lu.rank());
}

CurvatureReport curvature_report(const ConnectionValue& cv, double tol) {
  if (!cv.has_first()) throw Error(ErrorKind::MissingJet, "curvature report needs first derivatives of Γ");
  const std::size_t n = cv.dim;
  const double nn = static_cast<double>(n);
  CurvatureReport rep;
  rep.n = n;
  rep.point = cv.point;
  rep.T = torsion(cv);
  rep.R = curvature(cv);
  rep.r = ricci(rep.R);
  rep.r_plus = sym2(rep.r, 0, 1);
  rep.r_minus = alt2(rep.r, 0, 1);
  rep.s = trace2form(rep.R);
  rep.residuals["torsion"] = norm(rep.T);
  rep.residuals["first_bianchi"] = norm(first_bianchi(rep.R));
  if (cv.has_second()) rep.residuals["second_bianchi"] = norm(second_bianchi(cv));

  if (norm(rep.T) > tol) {
    rep.verdict = "torsion present: Weyl decomposition not defined";
    return rep;
  }
  rep.residuals["s_minus_2r_minus"] = norm(rep.s - 2.0 * rep.r_minus);
  const WeylParts wp = weyl(rep.R, std::max(tol, 1e-10));
  rep.W = wp.W;
  rep.Q = wp.Q;
  rep.F = wp.F;
  rep.residuals["ricci_W"] = norm(ricci(wp.W));
  rep.residuals["bianchi_W"] = norm(first_bianchi(wp.W));
  const TensorValue rebuilt = wp.W - wedge_id(rep.r_plus) * (1.0 / (nn - 1.0)) -
                              wedge_id(rep.r_minus) * (1.0 / (nn + 1.0));
  rep.residuals["reconstruction"] = norm(rep.R - rebuilt);
  rep.residuals["F_plus_trace_over_n1"] = norm(wp.F + rep.s * (1.0 / (nn + 1.0)));

  if (cv.has_second()) {
    rep.C = cotton(cv, tol);
    const CartanBlocks cb = cartan_curvature(cv, tol);
    rep.residuals["cartan_topleft"] = norm(cb.topleft);
    rep.residuals["cartan_bottomleft"] = norm(cb.bottomleft);
    rep.residuals["cartan_topright_minus_C"] = norm(cb.topright - *rep.C);
    rep.residuals["cartan_bottomright_minus_W"] = norm(cb.bottomright - wp.W);
  }

  const double wn = norm(wp.W);
  if (n >= 3) {
    rep.projectively_flat = wn <= tol;
    rep.verdict = *rep.projectively_flat ? "projectively flat (W=0)" : "not projectively flat (W!=0)";
  } else if (rep.C) {
    rep.projectively_flat = norm(*rep.C) <= tol;
    rep.verdict = *rep.projectively_flat ? "W=0, C=0: projectively flat (n=2 criterion)"
                                         : "C!=0: not projectively flat (n=2 criterion)";
  } else {
    rep.verdict = "W=0 (automatic for n=2); C not computed";
  }
  return rep;
}

void to_json(nlohmann::json& j, const CurvatureReport& rep) {
  j = nlohmann::json::object();
  j["n"] = rep.n;
  j["point"] = rep.point;
  j["T"] = rep.T;
  j["R"] = rep.R;
  j["r"] = rep.r;
  j["r_plus"] = rep.r_plus;
  j["r_minus"] = rep.r_minus;
  j["s"] = rep.s;
  if (rep.W) j["W"] = *rep.W;
  if (rep.Q) j["Q"] = *rep.Q;
  if (rep.F) j["F"] = *rep.F;
  if (rep.C) j["C"] = *rep.C;
  j["residuals"] = rep.residuals;
  j["projectively_flat"] = rep.projectively_flat ? nlohmann::json(*rep.projectively_flat) : nlohmann::json();
  j["verdict"] = rep.verdict;
}

}  // namespace projgeom
