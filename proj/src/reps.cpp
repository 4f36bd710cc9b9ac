#include "projgeom/reps.hpp"

#include <cmath>
#include <algorithm>
#include <complex>
#include <numeric>

#include "projgeom/algebra.hpp"
#include "projgeom/connection.hpp"
#include "projgeom/error.hpp"
#include "projgeom/tensor.hpp"

namespace projgeom {

namespace {

void require_rank(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "sl(n) needs n >= 2");
}

void require_weight(const WeightVector& w, std::size_t n) {
  if (w.size() != n - 1) {
    throw Error(ErrorKind::DimensionMismatch, "weight needs n-1 = " + std::to_string(n - 1) + " entries");
  }
  if (!is_dominant(w)) throw Error(ErrorKind::NotDominant, weight_label(w) + " is not dominant");
}

using Eigen::MatrixXd;

// Orthonormal basis of tensors antisymmetric in the last two of `rank` slots.
struct AntiBasis {
  std::size_t n;
  std::vector<Slot> variance;
  std::vector<std::vector<std::size_t>> heads;  // free leading indices
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t size() const { return heads.size() * pairs.size(); }

  TensorValue element(std::size_t c) const {
    TensorValue t(n, variance);
    const auto& h = heads[c / pairs.size()];
    const auto [i, j] = pairs[c % pairs.size()];
    std::vector<std::size_t> idx = h;
    idx.push_back(i);
    idx.push_back(j);
    t.at(idx) = M_SQRT1_2;
    std::swap(idx[idx.size() - 1], idx[idx.size() - 2]);
    t.at(idx) = -M_SQRT1_2;
    return t;
  }

  Eigen::VectorXd coords(const TensorValue& t) const {
    Eigen::VectorXd v(size());
    for (std::size_t c = 0; c < size(); ++c) {
      const auto& h = heads[c / pairs.size()];
      const auto [i, j] = pairs[c % pairs.size()];
      std::vector<std::size_t> a = h, b = h;
      a.push_back(i);
      a.push_back(j);
      b.push_back(j);
      b.push_back(i);
      v(c) = M_SQRT1_2 * (t.at(a) - t.at(b));
    }
    return v;
  }
};

AntiBasis make_basis(std::size_t n, std::vector<Slot> variance) {
  AntiBasis b{n, variance, {}, {}};
  const std::size_t free = variance.size() - 2;
  std::size_t count = 1;
  for (std::size_t s = 0; s < free; ++s) count *= n;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> h(free);
    std::size_t r = c;
    for (std::size_t s = free; s-- > 0;) {
      h[s] = r % n;
      r /= n;
    }
    b.heads.push_back(h);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b.pairs.emplace_back(i, j);
  return b;
}

template <class F>
MatrixXd matrix_of(const AntiBasis& b, F&& op) {
  MatrixXd M(b.size(), b.size());
  for (std::size_t c = 0; c < b.size(); ++c) M.col(c) = b.coords(op(b.element(c)));
  return M;
}

// Derivation action of j on every slot: +j on up slots, −(·)∘j on down slots.
TensorValue act(const MatrixXd& j, const TensorValue& t) {
  const std::size_t n = t.dim();
  TensorValue out(n, t.variance());
  for (std::size_t flat = 0; flat < t.data().size(); ++flat) {
    const auto idx = t.unflatten(flat);
    double v = 0.0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      auto other = idx;
      for (std::size_t m = 0; m < n; ++m) {
        other[s] = m;
        if (t.variance()[s] == Slot::Up) {
          v += j(idx[s], m) * t.at(other);
        } else {
          v -= t.at(other) * j(m, idx[s]);
        }
      }
    }
    out.data()[flat] = v;
  }
  return out;
}

TensorValue cyclic3(const TensorValue& R) {
  const std::size_t n = R.dim();
  TensorValue out(n, R.variance());
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          out({l, k, i, j}) = (R({l, k, i, j}) + R({l, i, j, k}) + R({l, j, k, i})) / 3.0;
  return out;
}

// e(β)^l_{kij} = β_{ij}δ^l_k + β_{jk}δ^l_i + β_{ki}δ^l_j, scaled to project.
TensorValue lambda3_trace_part(const TensorValue& tau) {
  const std::size_t n = tau.dim();
  TensorValue beta(n, {Slot::Down, Slot::Down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) beta({i, j}) += tau({l, l, i, j});
  TensorValue out(n, tau.variance());
  const double s = 1.0 / (static_cast<double>(n) - 2.0);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = 0.0;
          if (l == k) v += beta({i, j});
          if (l == i) v += beta({j, k});
          if (l == j) v += beta({k, i});
          out({l, k, i, j}) = s * v;
        }
  return out;
}

MatrixXd range_basis(const MatrixXd& P) {
  // QR's rank threshold is relative; a rounding-level P would look full rank
  if (P.cwiseAbs().maxCoeff() < 1e-9) return MatrixXd(P.rows(), 0);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(P);
  qr.setThreshold(1e-9);
  const auto r = qr.rank();
  const MatrixXd Q = qr.householderQ();
  return Q.leftCols(r);
}

}  // namespace

WeightVector fundamental(std::size_t n, std::size_t k) {
  require_rank(n);
  WeightVector w(n - 1, 0);
  if (k >= 1 && k <= n - 1) w[k - 1] = 1;
  return w;
}

WeightVector operator+(const WeightVector& a, const WeightVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "weights of different rank");
  WeightVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

WeightVector operator*(int c, const WeightVector& a) {
  WeightVector out(a);
  for (int& x : out) x *= c;
  return out;
}

bool is_dominant(const WeightVector& w) {
  return std::all_of(w.begin(), w.end(), [](int x) { return x >= 0; });
}

std::vector<WeightVector> weights_of_V(std::size_t n) {
  require_rank(n);
  std::vector<WeightVector> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(fundamental(n, k) + (-1) * fundamental(n, k - 1));
  return out;
}

std::vector<WeightVector> weights_of_dual(std::size_t n) {
  require_rank(n);
  std::vector<WeightVector> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(fundamental(n, k - 1) + (-1) * fundamental(n, k));
  return out;
}

std::vector<WeightVector> decompose_with(const WeightVector& hw, Factor factor, std::size_t n) {
  require_rank(n);
  require_weight(hw, n);
  std::vector<WeightVector> out;
  for (const auto& mu : factor == Factor::V ? weights_of_V(n) : weights_of_dual(n)) {
    const WeightVector w = hw + mu;
    if (is_dominant(w)) out.push_back(w);
  }
  return out;
}

std::uint64_t weyl_dim(const WeightVector& hw, std::size_t n) {
  require_rank(n);
  require_weight(hw, n);
  __int128 num = 1;
  __int128 den = 1;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      __int128 s = 0;
      for (std::size_t c = a; c < b; ++c) s += hw[c] + 1;
      num *= s;
      den *= static_cast<__int128>(b - a);
      const auto g = std::gcd(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
      num /= g;
      den /= g;
    }
  }
  if (den != 1) throw Error(ErrorKind::ContractViolation, "dimension formula did not reduce to an integer");
  return static_cast<std::uint64_t>(num);
}

std::string weight_label(const WeightVector& w) {
  std::string s = "V(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

CensusSpace census_space(Space space, std::size_t n) {
  if (n % 2 != 0) throw Error(ErrorKind::OddDimension, "the census needs even n");
  if (n < 2 || n > 6) throw Error(ErrorKind::ContractViolation, "the census is limited to n <= 6");
  const MatrixXd j0 = [&] {
    MatrixXd j = MatrixXd::Zero(n, n);
    for (std::size_t b = 0; b < n; b += 2) {
      j(b + 1, b) = 1.0;
      j(b, b + 1) = -1.0;
    }
    return j;
  }();
  const double nn = static_cast<double>(n);
  auto w = [&](std::size_t k) { return fundamental(n, k); };

  CensusSpace cs;
  cs.n = n;
  if (space == Space::Torsion) {
    const AntiBasis b = make_basis(n, {Slot::Up, Slot::Down, Slot::Down});
    cs.action = matrix_of(b, [&](const TensorValue& t) { return act(j0, t); });
    const MatrixXd P2 = matrix_of(b, [](const TensorValue& t) { return torsion_split(t).T2; });
    cs.projectors.push_back({"T1", w(n - 2) + w(1), false, MatrixXd::Identity(b.size(), b.size()) - P2});
    cs.projectors.push_back({"T2", w(n - 1), false, P2});
    return cs;
  }

  const AntiBasis b = make_basis(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  cs.action = matrix_of(b, [&](const TensorValue& t) { return act(j0, t); });
  auto bianchi_part = [](const TensorValue& R) { return R - cyclic3(R); };
  auto ricci_pm = [&](const TensorValue& R) {
    const TensorValue r = ricci(bianchi_part(R));
    return std::make_pair(sym2(r, 0, 1), alt2(r, 0, 1));
  };
  cs.projectors.push_back({"W", w(n - 2) + w(n - 1) + w(1), true, matrix_of(b, [&](const TensorValue& R) {
                             const auto [rp, rm] = ricci_pm(R);
                             const TensorValue Q = rp * (1.0 / (nn - 1.0)) + rm * (1.0 / (nn + 1.0));
                             return bianchi_part(R) + wedge_id(Q);
                           })});
  cs.projectors.push_back({"S2V*", 2 * w(n - 1), true, matrix_of(b, [&](const TensorValue& R) {
                             return wedge_id(ricci_pm(R).first) * (-1.0 / (nn - 1.0));
                           })});
  cs.projectors.push_back({"L2V*", w(n - 2), true, matrix_of(b, [&](const TensorValue& R) {
                             return wedge_id(ricci_pm(R).second) * (-1.0 / (nn + 1.0));
                           })});
  if (n >= 3) {
    const MatrixXd tr = matrix_of(b, [&](const TensorValue& R) { return lambda3_trace_part(cyclic3(R)); });
    const MatrixXd l3 = matrix_of(b, cyclic3);
    cs.projectors.push_back({"L3V*xV_0", w(n - 3) + w(1), false, l3 - tr});
    cs.projectors.push_back({"L3V*_trace", w(n - 2), false, tr});
  }
  return cs;
}

std::vector<IrrepComponent> j0_census(Space space, std::size_t n) {
  const CensusSpace cs = census_space(space, n);
  std::vector<IrrepComponent> out;
  for (const CensusProjector& p : cs.projectors) {
    const MatrixXd U = range_basis(p.P);
    if (U.cols() == 0) continue;
    IrrepComponent c;
    c.name = p.name;
    c.highest_weight = p.highest_weight;
    c.bianchi = p.bianchi;
    c.dim = static_cast<std::size_t>(U.cols());
    c.expected_dim = weyl_dim(p.highest_weight, n);
    const MatrixXd Mc = U.transpose() * cs.action * U;
    // Mc is skew, so i·Mc is Hermitian; Mc v = ik v ⇔ (i·Mc) v = −k v.
    const Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * Mc.cast<std::complex<double>>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
      const double lam = -es.eigenvalues()(e);
      const double k = std::round(lam);
      if (std::abs(lam - k) > 1e-8) {
        throw Error(ErrorKind::ContractViolation, "non-integral eigenvalue " + std::to_string(lam));
      }
      ++c.spectrum[static_cast<int>(k)];
    }
    out.push_back(std::move(c));
  }
  return out;
}

void to_json(nlohmann::json& j, const IrrepComponent& c) {
  j = nlohmann::json::object();
  j["name"] = c.name;
  j["highest_weight"] = c.highest_weight;
  j["label"] = weight_label(c.highest_weight);
  j["dim"] = c.dim;
  j["expected_dim"] = c.expected_dim;
  nlohmann::json spec = nlohmann::json::object();
  for (const auto& [k, m] : c.spectrum) spec[std::to_string(k)] = m;
  j["spectrum"] = spec;
  j["bianchi"] = c.bianchi;
}

}  // namespace projgeom
