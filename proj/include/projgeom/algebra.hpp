#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "projgeom/connection.hpp"
#include "projgeom/tensor.hpp"

namespace projgeom {

/// Element (X, A, α) of TM ⊕ End TM ⊕ T*M at a point. α is a row vector.
struct AlgebraElement {
  Eigen::VectorXd X;
  Eigen::MatrixXd A;
  Eigen::RowVectorXd alpha;

  static AlgebraElement zero(std::size_t n);
  static AlgebraElement vector(const Eigen::VectorXd& x);
  static AlgebraElement endo(const Eigen::MatrixXd& a);
  static AlgebraElement covector(const Eigen::RowVectorXd& a);
  std::size_t dim() const { return static_cast<std::size_t>(X.size()); }
};

/// [A,X] = AX, [α,A] = α∘A, [X,α]Y = α(X)Y + α(Y)X, [A,B] = AB − BA,
/// [X,Y] = [α,β] = 0, extended bilinearly and antisymmetrically.
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// max-abs over all three parts.
double norm(const AlgebraElement& a);

/// [Q∧Id](X,Y) = [Q(X),Y] − [Q(Y),X] with Q(X) = Q(X,·); result in the
/// R^l_{kij} layout.
TensorValue wedge_id(const TensorValue& Q);

/// For a T*-valued 2-form ω_{abc} = ω(∂_a,∂_b)(∂_c), the End-valued 3-form
/// [ω∧Id](X,Y,Z) = [ω(X,Y),Z] + [ω(Y,Z),X] + [ω(Z,X),Y]; slots (l, k, a, b, c).
TensorValue wedge_id_2form(const TensorValue& omega);

/// Λ³ part of a T*-valued 2-form: the ⅓ cyclic sum over (a,b,c).
TensorValue cyclic_part(const TensorValue& omega);

struct WeylParts {
  TensorValue W;
  TensorValue Q;
  TensorValue F;
};

/// Q = r₊/(n−1) + r₋/(n+1), W = R + [Q∧Id], F = −2 r₋/(n+1).
/// Throws NotBianchi when the first Bianchi residual of R exceeds `tol`.
WeylParts weyl(const TensorValue& R, double tol = 1e-10);

struct TorsionParts {
  TensorValue T1;  ///< trace-free part
  TensorValue T2;  ///< α_i δ^k_j − α_j δ^k_i
  std::vector<double> alpha;
};

/// α_j = T^k_{jk}/(n−1). Throws NotAntisymmetric.
TorsionParts torsion_split(const TensorValue& T, double tol = 1e-12);

/// Q^∇ at the point (needs dΓ).
TensorValue projective_q(const ConnectionValue& cv);

/// C_{ijk} = ∇_i Q_{jk} − ∇_j Q_{ik}. Needs ddΓ; throws HasTorsion.
TensorValue cotton(const ConnectionValue& cv, double torsion_tol = 1e-10);

/// Connection matrices Â_i of the Cartan connection on Λ ⊕ TMΛ, column
/// order (Λ, ∂_1..∂_n): top-left a_i = −Γ^k_{ik}/(n+1), top row Q_{i·},
/// first column e_i, lower block Γ^·_{i·} + a_i Id. Needs dΓ.
std::vector<Eigen::MatrixXd> cartan_connection(const ConnectionValue& cv);

struct CartanBlocks {
  TensorValue topleft;      ///< (i,j)
  TensorValue topright;     ///< (i,j,k)
  TensorValue bottomleft;   ///< (k,i,j)
  TensorValue bottomright;  ///< (l,k,i,j)
};

/// R̂_{ij} = ∂_iÂ_j − ∂_jÂ_i + [Â_i,Â_j] split into blocks. Needs ddΓ.
CartanBlocks cartan_curvature(const ConnectionValue& cv, double torsion_tol = 1e-10);

/// Dimension of {R ∈ Λ²V*⊗gl(V) : first Bianchi, ricci(R) = 0} by numeric rank.
std::size_t weyl_space_dimension(std::size_t n);

struct CurvatureReport {
  std::size_t n = 0;
  std::vector<double> point;
  TensorValue T, R, r, r_plus, r_minus, s;
  std::optional<TensorValue> W, Q, F, C;
  std::map<std::string, double> residuals;
  std::optional<bool> projectively_flat;
  std::string verdict;
};

/// Builds the report at cv. Torsionful inputs get R, r, s only. With ddΓ
/// the Cotton tensor, second Bianchi and Cartan blocks are included.
CurvatureReport curvature_report(const ConnectionValue& cv, double tol = 1e-9);

void to_json(nlohmann::json& j, const CurvatureReport& rep);

}  // namespace projgeom
