#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "projgeom/error.hpp"
#include "projgeom/reps.hpp"

using namespace projgeom;

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<WeightVector> sorted(std::vector<WeightVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("weights of the defining representation and its dual") {
  CHECK(weights_of_V(2) == std::vector<WeightVector>{{1}, {-1}});
  CHECK(weights_of_dual(3) == std::vector<WeightVector>{{-1, 0}, {1, -1}, {0, 1}});
  CHECK(weights_of_V(3) == std::vector<WeightVector>{{1, 0}, {-1, 1}, {0, -1}});
  for (std::size_t n = 2; n <= 8; ++n) {
    WeightVector s(n - 1, 0), t(n - 1, 0);
    for (const auto& w : weights_of_V(n)) s = s + w;
    for (const auto& w : weights_of_dual(n)) t = t + w;
    CHECK(s == WeightVector(n - 1, 0));
    CHECK(t == WeightVector(n - 1, 0));
    CHECK(weights_of_V(n).size() == n);
  }
}

TEST_CASE("decompositions at n = 5") {
  const std::size_t n = 5;
  auto w = [](std::size_t k) { return fundamental(5, k); };
  CHECK(sorted(decompose_with(w(3), Factor::V, n)) == sorted({w(1) + w(3), w(4)}));
  CHECK(sorted(decompose_with(w(3), Factor::Dual, n)) == sorted({w(2), w(3) + w(4)}));
  CHECK(sorted(decompose_with(w(3) + w(4), Factor::V, n)) == sorted({w(1) + w(3) + w(4), 2 * w(4), w(3)}));
  CHECK_THROWS_AS(decompose_with(WeightVector{1, -1, 0, 0}, Factor::V, n), Error);
  CHECK(fundamental(5, 0) == WeightVector(4, 0));
  CHECK(fundamental(5, 5) == WeightVector(4, 0));
}

TEST_CASE("Weyl dimension formula") {
  for (std::size_t n = 2; n <= 8; ++n) {
    CHECK(weyl_dim(fundamental(n, 1), n) == n);
    CHECK(weyl_dim(fundamental(n, n - 1), n) == n);
    for (std::size_t k = 0; k <= n; ++k) CHECK(weyl_dim(fundamental(n, k), n) == binom(n, k));
    for (int k = 0; k <= 4; ++k) CHECK(weyl_dim(k * fundamental(n, 1), n) == binom(n + k - 1, k));
    // adjoint
    CHECK(weyl_dim(fundamental(n, 1) + fundamental(n, n - 1), n) == n * n - 1);
  }
  CHECK(weyl_dim(WeightVector{1, 1}, 3) == 8);
  CHECK_THROWS_AS(weyl_dim(WeightVector{-1, 0}, 3), Error);
  CHECK(weight_label(WeightVector{1, 1, 0}) == "V(1,1,0)");
}

TEST_CASE("decomposition dimensions add up") {
  for (std::size_t n = 3; n <= 6; ++n) {
    const std::size_t l2 = n * (n - 1) / 2;
    std::uint64_t total = 0;
    for (const auto& c : decompose_with(fundamental(n, n - 2), Factor::V, n)) total += weyl_dim(c, n);
    CHECK(total == l2 * n);
    std::uint64_t curv = 0;
    for (const auto& a : decompose_with(fundamental(n, n - 2), Factor::Dual, n))
      for (const auto& b : decompose_with(a, Factor::V, n)) curv += weyl_dim(b, n);
    CHECK(curv == l2 * n * n);
    for (const auto& hw : {fundamental(n, 1) + fundamental(n, 2), 2 * fundamental(n, n - 1), fundamental(n, n - 2)})
      for (Factor f : {Factor::V, Factor::Dual}) {
        std::uint64_t s = 0;
        for (const auto& c : decompose_with(hw, f, n)) s += weyl_dim(c, n);
        CHECK(s == weyl_dim(hw, n) * n);
      }
  }
}

TEST_CASE("torsion census at n = 4") {
  const auto comps = j0_census(Space::Torsion, 4);
  REQUIRE(comps.size() == 2);
  const auto& t1 = comps[0].name == "T1" ? comps[0] : comps[1];
  const auto& t2 = comps[0].name == "T1" ? comps[1] : comps[0];
  CHECK(t1.dim == 20);
  CHECK(t2.dim == 4);
  CHECK(t1.spectrum.count(3) == 1);
  CHECK(t1.spectrum.count(-3) == 1);
  for (const auto& [k, m] : t2.spectrum) CHECK(std::abs(k) == 1);
}

TEST_CASE("curvature census at n = 4") {
  const auto comps = j0_census(Space::Curvature, 4);
  std::size_t total = 0;
  for (const auto& c : comps) {
    total += c.dim;
    CHECK_MESSAGE(c.dim == c.expected_dim, c.name);
    if (c.name == "W") {
      CHECK(c.dim == 64);
      CHECK(c.spectrum.count(4) == 1);
      CHECK(c.bianchi);
    }
    if (c.name == "S2V*" || c.name == "L2V*")
      for (const auto& [k, m] : c.spectrum) CHECK((k == 0 || std::abs(k) == 2));
    if (c.name != "W") CHECK(c.spectrum.count(4) == 0);
  }
  CHECK(total == 96);
  CHECK(comps.size() == 5);
  CHECK_THROWS_AS(j0_census(Space::Curvature, 3), Error);
}

TEST_CASE("census spectra are symmetric and count the dimension") {
  for (std::size_t n : {2u, 4u, 6u})
    for (Space s : {Space::Torsion, Space::Curvature})
      for (const auto& c : j0_census(s, n)) {
        std::size_t count = 0;
        for (const auto& [k, m] : c.spectrum) {
          count += m;
          CHECK(c.spectrum.count(-k) == 1);
          if (c.spectrum.count(-k)) CHECK(c.spectrum.at(-k) == m);
        }
        CHECK(count == c.dim);
        CHECK(c.dim == c.expected_dim);
      }
}

TEST_CASE("projectors and a trace oracle for multiplicities") {
  for (std::size_t n : {4u}) {
    for (Space space : {Space::Torsion, Space::Curvature}) {
      const CensusSpace cs = census_space(space, n);
      const auto N = cs.action.rows();
      CHECK((cs.action + cs.action.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(N, N);
      for (std::size_t a = 0; a < cs.projectors.size(); ++a) {
        const auto& P = cs.projectors[a].P;
        sum += P;
        CHECK((P * P - P).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((P * cs.action - cs.action * P).cwiseAbs().maxCoeff() <= 1e-10);
        for (std::size_t b = 0; b < cs.projectors.size(); ++b)
          if (a != b) CHECK((P * cs.projectors[b].P).cwiseAbs().maxCoeff() <= 1e-10);
      }
      CHECK((sum - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff() <= 1e-10);

      // i·action is Hermitian; group its eigenvectors by eigenvalue and trace P
      const Eigen::MatrixXcd H = std::complex<double>(0, 1) * cs.action.cast<std::complex<double>>();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
      const auto comps = j0_census(space, n);
      for (std::size_t a = 0; a < cs.projectors.size(); ++a) {
        const Eigen::MatrixXcd P = cs.projectors[a].P.cast<std::complex<double>>();
        std::map<int, double> mult;
        for (Eigen::Index e = 0; e < N; ++e) {
          const Eigen::VectorXcd v = es.eigenvectors().col(e);
          // i·M v = λ v  ⇔  M v = −iλ v
          const int k = static_cast<int>(std::lround(-es.eigenvalues()(e)));
          mult[k] += (v.adjoint() * P * v)(0, 0).real();
        }
        const auto it = std::find_if(comps.begin(), comps.end(), [&](const IrrepComponent& c) {
          return c.name == cs.projectors[a].name;
        });
        if (it == comps.end()) continue;
        for (const auto& [k, m] : mult) {
          const std::size_t got = it->spectrum.count(k) ? it->spectrum.at(k) : 0;
          CHECK_MESSAGE(std::abs(m - static_cast<double>(got)) <= 1e-8, it->name << " k=" << k);
        }
      }
    }
  }
}

TEST_CASE("census at n = 6 places 3i and 4i as expected") {
  const auto tors = j0_census(Space::Torsion, 6);
  for (const auto& c : tors) CHECK((c.spectrum.count(3) == 1) == (c.name == "T1"));
  const auto curv = j0_census(Space::Curvature, 6);
  for (const auto& c : curv)
    if (c.bianchi) CHECK((c.spectrum.count(4) == 1) == (c.name == "W"));
}

TEST_CASE("component json") {
  const auto comps = j0_census(Space::Torsion, 2);
  nlohmann::json j = comps.front();
  CHECK(j.contains("dim"));
  CHECK(j.contains("spectrum"));
}
