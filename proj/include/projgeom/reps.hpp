#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace projgeom {

/// Coefficients in the fundamental-weight basis ω₁..ω_{n−1} of sl(n).
using WeightVector = std::vector<int>;

enum class Factor { V, Dual };
enum class Space { Torsion, Curvature };

/// ω₁, ω₂ − ω₁, …, ω_{n−1} − ω_{n−2}, −ω_{n−1}.
std::vector<WeightVector> weights_of_V(std::size_t n);
/// −ω₁, ω₁ − ω₂, …, ω_{n−2} − ω_{n−1}, ω_{n−1}.
std::vector<WeightVector> weights_of_dual(std::size_t n);

/// ω_k for 0 ≤ k ≤ n, with ω₀ = ω_n = 0.
WeightVector fundamental(std::size_t n, std::size_t k);
WeightVector operator+(const WeightVector& a, const WeightVector& b);
WeightVector operator*(int c, const WeightVector& a);
bool is_dominant(const WeightVector& w);

/// {hw + μ : μ a weight of the factor, hw + μ dominant}. Throws NotDominant.
std::vector<WeightVector> decompose_with(const WeightVector& hw, Factor factor, std::size_t n);

/// Weyl dimension formula for sl(n). Throws NotDominant.
std::uint64_t weyl_dim(const WeightVector& hw, std::size_t n);

std::string weight_label(const WeightVector& w);

struct IrrepComponent {
  std::string name;
  WeightVector highest_weight;
  std::size_t dim = 0;               ///< numeric rank of the projector
  std::uint64_t expected_dim = 0;    ///< weyl_dim(highest_weight)
  std::map<int, std::size_t> spectrum;  ///< k ↦ multiplicity of eigenvalue i·k
  bool bianchi = false;              ///< curvature components inside the Bianchi space
};

struct CensusProjector {
  std::string name;
  WeightVector highest_weight;
  bool bianchi = false;
  Eigen::MatrixXd P;  ///< in the orthonormal basis of the ambient space
};

/// The ambient space in an orthonormal antisymmetric basis, the induced j₀
/// action on it and the component projectors.
struct CensusSpace {
  std::size_t n = 0;
  Eigen::MatrixXd action;
  std::vector<CensusProjector> projectors;
};

CensusSpace census_space(Space space, std::size_t n);

/// Equivariant decomposition of Λ²V*⊗V (torsion) or Λ²V*⊗V*⊗V (curvature)
/// with the j₀-eigenvalues on each summand. Components of rank 0 are
/// omitted. Throws OddDimension; n ≤ 6.
std::vector<IrrepComponent> j0_census(Space space, std::size_t n);

void to_json(nlohmann::json& j, const IrrepComponent& c);

}  // namespace projgeom
