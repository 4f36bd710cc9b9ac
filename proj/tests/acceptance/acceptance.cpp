// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "projgeom/algebra.hpp"
#include "projgeom/develop.hpp"
#include "projgeom/error.hpp"
#include "projgeom/projective.hpp"
#include "projgeom/reps.hpp"
#include "projgeom/twistor.hpp"
#include "support.hpp"

using namespace projgeom;
using namespace testsupport;

namespace {

const auto U = Slot::Up;
const auto D = Slot::Down;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// 1
Outcome ricci_constants() {
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 6; ++n)
    for (int t = 0; t < 20; ++t) {
      const double nn = static_cast<double>(n);
      const TensorValue Q = random_tensor(n, {D, D}, rng);
      const TensorValue lhs = ricci(wedge_id(Q));
      const TensorValue rhs = alt2(Q, 0, 1) * -(nn + 1) - sym2(Q, 0, 1) * (nn - 1);
      worst = std::max(worst, norm(lhs - rhs));
    }
  return {worst <= 1e-12, fmt("100 random Q, n=2..6: max residual %.3g (tol 1e-12)", worst)};
}

// 2
Outcome weyl_invariance() {
  Rng rng(102);
  double worst = 0.0;
  for (std::size_t n : {3u, 4u})
    for (int t = 0; t < 10; ++t) {
      const ConnectionSpec s = random_torsion_free(n, rng, 2);
      const OneFormField a = random_alpha(n, rng, 2);
      worst = std::max(worst, check_weyl_invariance(s, a, random_points(n, 10, rng)).weyl_residual);
    }
  return {worst <= 1e-9, fmt("20 connections x 10 points, n=3,4: max |W'-W| %.3g (tol 1e-9)", worst)};
}

// 3
Outcome n2_degeneracy() {
  Rng rng(103);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const ConnectionSpec s = random_torsion_free(2, rng, 3);
    worst = std::max(worst, norm(weyl(curvature(evaluate(s, random_points(2, 1, rng)[0]))).W));
  }
  return {worst <= 1e-12, fmt("50 random torsion-free n=2: max |W| %.3g (tol 1e-12)", worst)};
}

// 4
Outcome model_flatness() {
  Rng rng(104);
  double wc = 0.0, blocks = 0.0, hol = 0.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    const ConnectionSpec g = model_metric(n);
    for (const auto& p : random_points(n, 10, rng)) {
      const ConnectionValue cv = evaluate(g, p, Derivatives::Second);
      wc = std::max(wc, n == 2 ? norm(cotton(cv)) : norm(weyl(curvature(cv)).W));
      const CartanBlocks b = cartan_curvature(cv);
      blocks = std::max({blocks, norm(b.topleft), norm(b.topright), norm(b.bottomleft), norm(b.bottomright)});
    }
    hol = std::max(hol, holonomy_check(g, random_points(n, 1, rng, 0.2)[0], 0));
  }
  const bool ok = wc <= 1e-10 && blocks <= 1e-9 && hol <= 1e-7;
  return {ok, fmt("round metric n=2..4: max |W| or |C| %.3g (tol 1e-10), Cartan blocks %.3g (tol 1e-9)", wc, blocks) +
                  fmt(", loop holonomy %.3g (tol 1e-7)", hol)};
}

// 5
Outcome developing_map() {
  const ConnectionSpec g = model_metric(2);
  const std::vector<double> x0{0.05, -0.05};
  Rng rng(105);
  double col = 0.0, path = 0.0;
  for (int t = 0; t < 4; ++t) {
    const std::vector<double> start{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    const double th = rng.uniform(0.0, 2.0 * M_PI);
    const auto geo = geodesic_trace(g, start, {std::cos(th), std::sin(th)}, 0.4, 400);
    std::vector<std::vector<double>> targets;
    for (std::size_t s = 0; s <= 400; s += 50) targets.push_back(geo[s]);
    const auto img = develop_map(g, x0, targets);
    for (std::size_t a = 1; a + 1 < img.size(); ++a)
      col = std::max(col, collinearity_defect(img.front().image, img[a].image, img.back().image));
    for (const auto& d : img) path = std::max(path, d.path_error);
  }
  double affine = 0.0;
  std::vector<std::vector<double>> grid;
  for (double a = -0.4; a <= 0.41; a += 0.2)
    for (double b = -0.4; b <= 0.41; b += 0.2) grid.push_back({a, b, 0.5 * a - b});
  for (const auto& d : develop_map(model_connection(3), {0.0, 0.0, 0.0}, grid)) {
    Eigen::VectorXd h(4);
    h << 1.0, d.target[0], d.target[1], d.target[2];
    affine = std::max(affine, d.image.distance(ProjectivePoint::from(h)));
  }
  const bool ok = col <= 1e-6 && path <= 1e-7 && affine <= 1e-14;
  return {ok, fmt("round n=2: geodesic collinearity %.3g (tol 1e-6), path independence %.3g (tol 1e-7)", col, path) +
                  fmt(", Gamma=0 affine embedding deviation %.3g", affine)};
}

// 6
Outcome witness_holonomy() {
  const ConnectionSpec s = witness_connection(3);
  const std::vector<double> x0{0.1, 0.1, 0.1};
  const double hol = holonomy_check(s, x0);
  bool notflat = false;
  try {
    develop_map(s, x0, {{0.2, 0.2, 0.2}});
  } catch (const Error& e) {
    notflat = e.kind() == ErrorKind::NotFlat;
  }
  return {hol >= 1e-3 && notflat,
          fmt("W!=0 witness n=3: loop holonomy %.3g (need >= 1e-3), NotFlat ", hol) + (notflat ? "raised" : "missing")};
}

// 7
Outcome twistor_integrability() {
  Rng rng(107);
  double flat = 0.0, two = 0.0, witness = 0.0;
  for (const auto& tp : sample_twistor_points(random_points(4, 5, rng, 0.3), 1))
    flat = std::max(flat, nijenhuis(model_connection(4), tp, {}));
  for (int c = 0; c < 5; ++c) {
    const ConnectionSpec s = random_torsion_free(2, rng, 2);
    for (const auto& tp : sample_twistor_points(random_points(2, 5, rng, 0.3), static_cast<std::uint64_t>(c)))
      two = std::max(two, nijenhuis(s, tp, {}));
  }
  for (const auto& tp : sample_twistor_points(random_points(4, 5, rng, 0.3), 2))
    witness = std::max(witness, nijenhuis(witness_connection(4), tp, {}));
  const bool ok = flat <= 1e-5 && two <= 1e-5 && witness >= 1e-2;
  return {ok, fmt("Gamma=0 n=4: %.3g, random n=2 (5x5 points): %.3g (tol 1e-5)", flat, two) +
                  fmt("; W!=0 witness n=4: %.3g (need >= 1e-2)", witness)};
}

// 8
Outcome same_j_equivalence() {
  Rng rng(108);
  int agree = 0, total = 0, eq_yes = 0, generic_no = 0;
  for (std::size_t n : {2u, 4u}) {
    const auto js = sample_complex_structures(n, 10, 100 + n);
    for (int t = 0; t < 25; ++t) {
      const bool constructed = (t + static_cast<int>(n / 2)) % 2 == 0;
      const ConnectionSpec a = random_torsion_free(n, rng, 2);
      const ConnectionSpec b = constructed ? projective_change(a, random_alpha(n, rng, 2)) : random_torsion_free(n, rng, 2);
      const auto pts = random_points(n, 3, rng);
      const bool pe = projectively_equivalent(a, b, pts).equivalent;
      const bool sj = same_twistor_structure(a, b, pts, js).same;
      ++total;
      if (pe == sj) ++agree;
      if (constructed && pe) ++eq_yes;
      if (!constructed && !pe) ++generic_no;
    }
  }
  const bool ok = agree == total && eq_yes == 25 && generic_no == 25;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d pairs agree (n=2,4); constructed pairs equivalent %d/25, generic pairs inequivalent %d/25",
                agree, total, eq_yes, generic_no);
  return {ok, buf};
}

// 9
Outcome torsion_removal() {
  Rng rng(109);
  double residual = 0.0;
  int ok_count = 0, same_j = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = t % 2 == 0 ? 2 : 4;
    const ConnectionSpec s = random_pure_trace_torsion(n, rng);
    const auto pts = random_points(n, 5, rng);
    const TorsionRemoval r = remove_torsion(s, pts);
    if (!r.ok) continue;
    ++ok_count;
    residual = std::max(residual, r.residual_torsion);
    if (same_twistor_structure(s, *r.spec, pts, sample_complex_structures(n, 5, 200 + t)).same) ++same_j;
  }
  int failed = 0;
  double t1min = 1e300;
  for (int t = 0; t < 5; ++t) {
    const TorsionRemoval r = remove_torsion(random_connection(3, rng), random_points(3, 3, rng));
    if (!r.ok) {
      ++failed;
      t1min = std::min(t1min, r.t1_norm);
    }
  }
  const bool ok = ok_count == 20 && same_j == 20 && residual <= 1e-10 && failed == 5 && t1min > 1e-10;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "pure-trace: %d/20 removed, output torsion %.3g (tol 1e-10), J unchanged %d/20; generic: %d/5 FAIL, "
                "min reported |T1| %.3g",
                ok_count, residual, same_j, failed, t1min);
  return {ok, buf};
}

// 10
Outcome representation_census() {
  bool ok = true;
  std::string notes;
  auto same_set = [](std::vector<WeightVector> a, std::vector<WeightVector> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  for (std::size_t n = 4; n <= 6; ++n) {
    auto w = [n](std::size_t k) { return fundamental(n, k); };
    const std::uint64_t l2 = n * (n - 1) / 2;
    const auto tors = decompose_with(w(n - 2), Factor::V, n);
    std::uint64_t tsum = 0;
    for (const auto& c : tors) tsum += weyl_dim(c, n);
    ok = ok && same_set(tors, {w(n - 2) + w(1), w(n - 1)}) && tsum == l2 * n;

    const auto first = decompose_with(w(n - 2), Factor::Dual, n);
    ok = ok && same_set(first, {w(n - 3), w(n - 2) + w(n - 1)});
    std::vector<WeightVector> curv;
    std::uint64_t csum = 0;
    for (const auto& a : first)
      for (const auto& b : decompose_with(a, Factor::V, n)) {
        curv.push_back(b);
        csum += weyl_dim(b, n);
      }
    ok = ok && curv.size() == 5 &&
         same_set(curv, {w(n - 3) + w(1), w(n - 2), w(1) + w(n - 2) + w(n - 1), 2 * w(n - 1), w(n - 2)}) &&
         csum == l2 * n * n;
  }
  notes += ok ? "component lists and dimension sums match at n=4,5,6" : "component lists or dimensions differ";
  bool spectra = true;
  for (std::size_t n : {4u, 6u}) {
    for (const auto& c : j0_census(Space::Torsion, n)) {
      spectra = spectra && c.dim == c.expected_dim;
      spectra = spectra && ((c.spectrum.count(3) == 1) == (c.name == "T1"));
    }
    for (const auto& c : j0_census(Space::Curvature, n)) {
      spectra = spectra && c.dim == c.expected_dim;
      if (c.bianchi) spectra = spectra && ((c.spectrum.count(4) == 1) == (c.name == "W"));
    }
  }
  notes += spectra ? "; 3i on T1 only, 4i on W only among Bianchi components (n=4,6)" : "; census spectra differ";
  return {ok && spectra, notes};
}

// 11
Outcome identity_suite() {
  Rng rng(111);
  double b1 = 0.0, b2 = 0.0, s2r = 0.0, contr = 0.0, jac = 0.0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const double nn = static_cast<double>(n);
    for (int t = 0; t < 5; ++t) {
      const auto p = random_points(n, 1, rng)[0];
      const ConnectionValue tf = evaluate(random_torsion_free(n, rng, 3), p, Derivatives::Second);
      const TensorValue R = curvature(tf);
      b1 = std::max(b1, norm(first_bianchi(R)));
      b2 = std::max(b2, norm(second_bianchi(tf)));
      b2 = std::max(b2, norm(second_bianchi(evaluate(random_connection(n, rng, 3), p, Derivatives::Second))));
      s2r = std::max(s2r, norm(trace2form(R) - alt2(ricci(R), 0, 1) * 2.0));

      const TensorValue omega = alt2(random_tensor(n, {D, D, D}, rng), 0, 1);
      const TensorValue minus = cyclic_part(omega), plus = omega - minus;
      const TensorValue tr = contract(wedge_id_2form(omega), 0, 4);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            contr = std::max(contr, std::abs(tr({k, a, b}) + (nn - 2) * plus({a, b, k}) + (nn + 1) * minus({a, b, k})));

      auto elem = [&] {
        AlgebraElement e = AlgebraElement::zero(n);
        e.X = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(n), [&] { return rng.uniform(-1, 1); });
        e.A = Eigen::MatrixXd::NullaryExpr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                           [&] { return rng.uniform(-1, 1); });
        e.alpha = Eigen::RowVectorXd::NullaryExpr(static_cast<Eigen::Index>(n), [&] { return rng.uniform(-1, 1); });
        return e;
      };
      const AlgebraElement a = elem(), b = elem(), c = elem();
      const AlgebraElement x = bracket(bracket(a, b), c), y = bracket(bracket(b, c), a), z = bracket(bracket(c, a), b);
      jac = std::max(jac, norm(AlgebraElement{x.X + y.X + z.X, x.A + y.A + z.A, x.alpha + y.alpha + z.alpha}));
    }
  }
  const double worst = std::max({b1, b2, s2r, contr, jac});
  return {worst <= 1e-10, fmt("Bianchi I %.3g, Bianchi II %.3g", b1, b2) + fmt(", s-2r_ %.3g, contraction %.3g", s2r, contr) +
                              fmt(", Jacobi %.3g (tol 1e-10)", jac)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ricci contraction constants", ricci_constants},
      {"Weyl projective invariance", weyl_invariance},
      {"n=2 Weyl degeneracy", n2_degeneracy},
      {"projective flatness of the model", model_flatness},
      {"developing map", developing_map},
      {"Cartan flatness converse", witness_holonomy},
      {"twistor integrability", twistor_integrability},
      {"same J iff projectively equivalent", same_j_equivalence},
      {"torsion removal", torsion_removal},
      {"representation census", representation_census},
      {"identity suite", identity_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
