#include <doctest.h>

#include <cmath>
#include <functional>

#include "projgeom/error.hpp"
#include "projgeom/connection.hpp"
#include "projgeom/develop.hpp"
#include "support.hpp"

using namespace projgeom;
using namespace testsupport;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ContractViolation;
}

double max_diff(const TensorValue& a, const TensorValue& b) { return norm(a - b); }

ConnectionSpec metric_from_text(std::size_t n, const std::vector<std::string>& entries) {
  std::vector<std::optional<Expr>> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!entries[i * n + j].empty()) table[i * n + j] = parse(entries[i * n + j], n);
  return ConnectionSpec::from_metric(n, std::move(table));
}

// R from central differences of Γ values.
TensorValue curvature_fd(const ConnectionSpec& spec, const std::vector<double>& p, double h) {
  const std::size_t n = spec.dim();
  const ConnectionValue cv = evaluate(spec, p, Derivatives::None);
  std::vector<ConnectionValue> plus, minus;
  for (std::size_t i = 0; i < n; ++i) {
    auto pp = p, pm = p;
    pp[i] += h;
    pm[i] -= h;
    plus.push_back(evaluate(spec, pp, Derivatives::None));
    minus.push_back(evaluate(spec, pm, Derivatives::None));
  }
  auto dG = [&](std::size_t d, std::size_t l, std::size_t a, std::size_t b) {
    return (plus[d].gamma_at(l, a, b) - minus[d].gamma_at(l, a, b)) / (2 * h);
  };
  TensorValue R(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = dG(i, l, j, k) - dG(j, l, i, k);
          for (std::size_t m = 0; m < n; ++m)
            v += cv.gamma_at(l, i, m) * cv.gamma_at(m, j, k) - cv.gamma_at(l, j, m) * cv.gamma_at(m, i, k);
          R({l, k, i, j}) = v;
        }
  return R;
}

}  // namespace

TEST_CASE("Euclidean metric has vanishing Christoffel symbols") {
  const ConnectionSpec g = metric_from_text(3, {"1", "", "", "", "1", "", "", "", "1"});
  Rng rng(1);
  for (const auto& p : random_points(3, 5, rng)) {
    const ConnectionValue cv = evaluate(g, p, Derivatives::Second);
    for (double v : cv.gamma) CHECK(v == 0.0);
    for (double v : cv.dgamma) CHECK(v == 0.0);
  }
}

TEST_CASE("round metric at the origin and at a generic point") {
  const ConnectionSpec g = model_metric(2);
  const std::vector<double> o{0.0, 0.0};
  for (double v : evaluate(g, o).gamma) CHECK(std::abs(v) <= 1e-15);

  const std::vector<double> p{0.3, -0.2};
  const ConnectionValue cv = evaluate(g, p, Derivatives::First);
  CHECK(norm(torsion(cv)) == 0.0);
  CHECK(norm(metricity_defect(g, p)) <= 1e-12);
}

TEST_CASE("Levi-Civita against the difference-quotient Christoffel formula") {
  const ConnectionSpec g = metric_from_text(2, {"2 + sin(x1*x2)", "0.3*x1", "", "1 + x1^2 + exp(x2)"});
  const std::vector<double> p{0.4, -0.7};
  const ConnectionValue cv = levi_civita(g, p, Derivatives::First);
  const double h = 1e-5;
  const auto g0 = metric_at(g, p);
  std::vector<std::vector<double>> dg(2);
  for (std::size_t l = 0; l < 2; ++l) {
    auto pp = p, pm = p;
    pp[l] += h;
    pm[l] -= h;
    const auto a = metric_at(g, pp), b = metric_at(g, pm);
    for (std::size_t e = 0; e < 4; ++e) dg[l].push_back((a[e] - b[e]) / (2 * h));
  }
  const double det = g0[0] * g0[3] - g0[1] * g0[2];
  const double inv[4] = {g0[3] / det, -g0[1] / det, -g0[2] / det, g0[0] / det};
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < 2; ++l)
          v += 0.5 * inv[k * 2 + l] * (dg[i][j * 2 + l] + dg[j][i * 2 + l] - dg[l][i * 2 + j]);
        CHECK(std::abs(v - cv.gamma_at(k, i, j)) <= 1e-8);
      }
}

TEST_CASE("derivative jets of Levi-Civita match differences of Gamma") {
  const ConnectionSpec g = metric_from_text(2, {"2 + sin(x1*x2)", "0.3*x1", "", "1 + x1^2 + exp(x2)"});
  const std::vector<double> p{0.4, -0.7};
  const ConnectionValue cv = levi_civita(g, p, Derivatives::Second);
  const double h = 1e-5;
  for (std::size_t l = 0; l < 2; ++l) {
    auto pp = p, pm = p;
    pp[l] += h;
    pm[l] -= h;
    const ConnectionValue a = levi_civita(g, pp, Derivatives::First), b = levi_civita(g, pm, Derivatives::First);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          CHECK(std::abs((a.gamma_at(k, i, j) - b.gamma_at(k, i, j)) / (2 * h) - cv.dgamma_at(k, i, j, l)) <= 1e-8);
          for (std::size_t m = 0; m < 2; ++m)
            CHECK(std::abs((a.dgamma_at(k, i, j, m) - b.dgamma_at(k, i, j, m)) / (2 * h) -
                           cv.ddgamma_at(k, i, j, m, l)) <= 1e-7);
        }
  }
}

TEST_CASE("metricity of random metrics") {
  Rng rng(2);
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        e[i * n + j] = (i == j ? "3 + " : "0.2*(") + random_poly_text(n, rng, 2) + (i == j ? "" : ")");
    const ConnectionSpec g = metric_from_text(n, e);
    for (const auto& p : random_points(n, 3, rng, 0.3)) CHECK(norm(metricity_defect(g, p)) <= 1e-12);
  }
}

TEST_CASE("torsion of a simple connection") {
  const ConnectionSpec s = christoffel_from_text(2, {"", "x2", "", "", "", "", "", ""});
  const std::vector<double> p{0.1, 0.6};
  const TensorValue T = torsion(evaluate(s, p));
  CHECK(T({0, 0, 1}) == 0.6);
  CHECK(T({0, 1, 0}) == -0.6);
  CHECK(T({1, 0, 1}) == 0.0);
  Rng rng(3);
  const ConnectionSpec r = random_connection(3, rng);
  const TensorValue Tr = torsion(evaluate(r, random_points(3, 1, rng)[0]));
  CHECK(norm(Tr + swap_slots(Tr, 1, 2)) == 0.0);
  CHECK(norm(Tr) > 0.1);
}

TEST_CASE("curvature of the round metric is the constant-curvature tensor") {
  Rng rng(4);
  for (std::size_t n = 2; n <= 4; ++n)
    for (const auto& p : random_points(n, 3, rng, 0.4)) {
      const ConnectionSpec g = model_metric(n);
      const TensorValue R = curvature(evaluate(g, p));
      CHECK(max_diff(R, constant_curvature(metric_at(g, p), n)) <= 1e-10);
      const TensorValue r = ricci(R);
      TensorValue expected(n, {Slot::Down, Slot::Down}, metric_at(g, p));
      CHECK(max_diff(r, expected * -static_cast<double>(n - 1)) <= 1e-10);
      CHECK(norm(trace2form(R)) <= 1e-12);
    }
  const std::vector<double> o{0.0, 0.0};
  const TensorValue r0 = ricci(curvature(evaluate(model_metric(2), o)));
  CHECK(r0({0, 0}) == doctest::Approx(-4.0));
  CHECK(r0({1, 1}) == doctest::Approx(-4.0));
}

TEST_CASE("curvature matches a difference-quotient oracle") {
  Rng rng(5);
  for (std::size_t n = 2; n <= 4; ++n) {
    const ConnectionSpec s = random_connection(n, rng);
    const auto p = random_points(n, 1, rng)[0];
    const TensorValue R = curvature(evaluate(s, p));
    CHECK(max_diff(R, curvature_fd(s, p, 1e-5)) <= 1e-8);
    CHECK(max_diff(R, swap_slots(R, 2, 3) * -1.0) == 0.0);
  }
}

TEST_CASE("first Bianchi and s = 2 alt(r) for torsion-free connections") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const ConnectionSpec s = random_torsion_free(n, rng, 3);
    const auto p = random_points(n, 1, rng)[0];
    const TensorValue R = curvature(evaluate(s, p));
    CHECK(norm(first_bianchi(R)) <= 1e-12);
    const TensorValue r = ricci(R);
    CHECK(max_diff(trace2form(R), alt2(r, 0, 1) * 2.0) <= 1e-12);
    CHECK(max_diff(r - swap_slots(r, 0, 1), trace2form(R)) <= 1e-12);
  }
}

TEST_CASE("ricci and trace forms against loops") {
  Rng rng(7);
  const TensorValue R = random_tensor(3, {Slot::Up, Slot::Down, Slot::Down, Slot::Down}, rng);
  const TensorValue r = ricci(R), s = trace2form(R);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double a = 0.0, b = 0.0;
      for (std::size_t m = 0; m < 3; ++m) {
        a += R({m, j, i, m});
        b += R({m, m, i, j});
      }
      CHECK(std::abs(r({i, j}) - a) <= 1e-14);
      CHECK(std::abs(s({i, j}) - b) <= 1e-14);
    }
  CHECK_THROWS_AS(ricci(TensorValue(3, {Slot::Down, Slot::Down})), Error);
}

TEST_CASE("second Bianchi identity with and without torsion") {
  Rng rng(8);
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto pts = random_points(n, 3, rng);
    const ConnectionSpec tf = random_torsion_free(n, rng, 3);
    const ConnectionSpec gen = random_connection(n, rng, 3);
    for (const auto& p : pts) {
      CHECK(norm(second_bianchi(evaluate(tf, p, Derivatives::Second))) <= 1e-10);
      CHECK(norm(second_bianchi(evaluate(gen, p, Derivatives::Second))) <= 1e-10);
    }
  }
  CHECK(norm(second_bianchi(evaluate(model_metric(3), std::vector<double>{0.1, 0.2, -0.3},
                                     Derivatives::Second))) <= 1e-10);
}

TEST_CASE("evaluation errors") {
  const ConnectionSpec g = metric_from_text(2, {"1", "1", "", "1"});
  const std::vector<double> p{0.0, 0.0};
  CHECK(kind_of([&] { evaluate(g, p); }) == ErrorKind::SingularMetric);
  const ConnectionSpec s = christoffel_from_text(2, {"x1", "", "", "", "", "", "", ""});
  CHECK(kind_of([&] { curvature(evaluate(s, p, Derivatives::None)); }) == ErrorKind::MissingJet);
  CHECK(kind_of([&] { curvature_derivative(evaluate(s, p)); }) == ErrorKind::MissingJet);
  CHECK(kind_of([&] { evaluate(s, std::vector<double>{0.0}); }) == ErrorKind::DimensionMismatch);
  const ConnectionSpec boxed = s.with_domain(-1.0, 1.0);
  CHECK(kind_of([&] { evaluate(boxed, std::vector<double>{1.5, 0.0}); }) == ErrorKind::DomainError);
  const ConnectionSpec lnspec = christoffel_from_text(2, {"ln(x1)", "", "", "", "", "", "", ""});
  CHECK(kind_of([&] { evaluate(lnspec, std::vector<double>{-1.0, 0.0}); }) == ErrorKind::DomainError);
}

TEST_CASE("metric shifts add alpha_i delta^k_j + alpha_j delta^k_i") {
  const ConnectionSpec g = model_metric(2);
  OneFormField a = OneFormField::zero(2);
  a.components[0] = parse("x2", 2);
  a.components[1] = parse("x1*x1", 2);
  const ConnectionSpec shifted = g.with_shift(a);
  const std::vector<double> p{0.3, -0.4};
  const ConnectionValue base = evaluate(g, p, Derivatives::Second);
  const ConnectionValue moved = evaluate(shifted, p, Derivatives::Second);
  const double alpha[2] = {-0.4, 0.09};
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const double d = (j == k ? alpha[i] : 0.0) + (i == k ? alpha[j] : 0.0);
        CHECK(std::abs(moved.gamma_at(k, i, j) - base.gamma_at(k, i, j) - d) <= 1e-15);
      }
  // ∂_1 α_2 = 2 x1 lands in ∂_1 Γ^2_{22} twice
  CHECK(std::abs(moved.dgamma_at(1, 1, 1, 0) - base.dgamma_at(1, 1, 1, 0) - 2 * 2 * 0.3) <= 1e-14);
}
