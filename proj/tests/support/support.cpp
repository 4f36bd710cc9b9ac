#include "support.hpp"

#include <cstdio>

#include "projgeom/chart_file.hpp"
#include "projgeom/expr.hpp"

#ifndef PROJGEOM_TEST_DATA
#define PROJGEOM_TEST_DATA "tests/data"
#endif

namespace testsupport {

using namespace projgeom;

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

}  // namespace

std::string random_poly_text(std::size_t n, Rng& rng, int degree) {
  std::string s = number(rng.uniform(-1.0, 1.0));
  if (degree >= 1)
    for (std::size_t i = 1; i <= n; ++i) s += " + " + number(rng.uniform(-1.0, 1.0)) + "*x" + std::to_string(i);
  if (degree >= 2)
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i; j <= n; ++j)
        s += " + " + number(rng.uniform(-1.0, 1.0)) + "*x" + std::to_string(i) + "*x" + std::to_string(j);
  if (degree >= 3)
    for (std::size_t i = 1; i <= n; ++i)
      s += " + " + number(rng.uniform(-1.0, 1.0)) + "*x" + std::to_string(i) + "^3";
  return s;
}

ConnectionSpec random_connection(std::size_t n, Rng& rng, int degree) {
  std::vector<std::optional<Expr>> table(n * n * n);
  for (auto& e : table) e = parse(random_poly_text(n, rng, degree), n);
  return ConnectionSpec::from_christoffel(n, std::move(table));
}

ConnectionSpec random_torsion_free(std::size_t n, Rng& rng, int degree) {
  std::vector<std::optional<Expr>> table(n * n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const Expr e = parse(random_poly_text(n, rng, degree), n);
        table[(k * n + i) * n + j] = e;
        table[(k * n + j) * n + i] = e;
      }
  return ConnectionSpec::from_christoffel(n, std::move(table));
}

ConnectionSpec random_pure_trace_torsion(std::size_t n, Rng& rng) {
  const ConnectionSpec base = random_torsion_free(n, rng, 2);
  const OneFormField a = random_alpha(n, rng, 1);
  std::vector<std::optional<Expr>> table(n * n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Expr e = *base.christoffel(k, i, j);
        if (j == k) e = e + Expr::number(0.5) * a.components[i];
        if (i == k) e = e - Expr::number(0.5) * a.components[j];
        table[(k * n + i) * n + j] = e;
      }
  return ConnectionSpec::from_christoffel(n, std::move(table));
}

OneFormField random_alpha(std::size_t n, Rng& rng, int degree) {
  OneFormField a = OneFormField::zero(n);
  for (auto& c : a.components) c = parse(random_poly_text(n, rng, degree), n);
  return a;
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t count, Rng& rng, double half_width) {
  std::vector<std::vector<double>> pts(count, std::vector<double>(n));
  for (auto& p : pts)
    for (double& x : p) x = rng.uniform(-half_width, half_width);
  return pts;
}

TensorValue random_tensor(std::size_t n, std::vector<Slot> variance, Rng& rng) {
  TensorValue t(n, std::move(variance));
  for (double& x : t.data()) x = rng.uniform(-1.0, 1.0);
  return t;
}

ConnectionSpec witness_connection(std::size_t n) {
  std::vector<std::optional<Expr>> table(n * n * n);
  table[(0 * n + 1) * n + 1] = parse("x3", n);
  return ConnectionSpec::from_christoffel(n, std::move(table));
}

ConnectionSpec christoffel_from_text(std::size_t n, const std::vector<std::string>& entries) {
  std::vector<std::optional<Expr>> table(n * n * n);
  for (std::size_t a = 0; a < entries.size(); ++a)
    if (!entries[a].empty()) table[a] = parse(entries[a], n);
  return ConnectionSpec::from_christoffel(n, std::move(table));
}

std::string data_path(const std::string& name) { return std::string(PROJGEOM_TEST_DATA) + "/" + name; }

ConnectionSpec data_chart(const std::string& name) { return load_chart(data_path(name)); }

TensorValue wedge_id_closed(const TensorValue& Q) {
  const std::size_t n = Q.dim();
  TensorValue out(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  auto d = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          out({l, k, i, j}) = -Q({i, j}) * d(l, k) - Q({i, k}) * d(l, j) + Q({j, i}) * d(l, k) + Q({j, k}) * d(l, i);
  return out;
}

TensorValue constant_curvature(const std::vector<double>& g, std::size_t n) {
  TensorValue R(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          R({l, k, i, j}) = (l == i ? g[j * n + k] : 0.0) - (l == j ? g[i * n + k] : 0.0);
  return R;
}

}  // namespace testsupport
