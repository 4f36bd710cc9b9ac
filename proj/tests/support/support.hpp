#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "projgeom/connection.hpp"
#include "projgeom/random.hpp"
#include "projgeom/tensor.hpp"

namespace testsupport {

using projgeom::ConnectionSpec;
using projgeom::OneFormField;
using projgeom::Rng;
using projgeom::TensorValue;

/// Random polynomial of total degree ≤ `degree`, coefficients in [−1,1].
std::string random_poly_text(std::size_t n, Rng& rng, int degree = 2);

ConnectionSpec random_connection(std::size_t n, Rng& rng, int degree = 2);
ConnectionSpec random_torsion_free(std::size_t n, Rng& rng, int degree = 2);
/// Γ = torsion-free part + ½(α_i δ^k_j − α_j δ^k_i), so T = ᾱ is pure trace.
ConnectionSpec random_pure_trace_torsion(std::size_t n, Rng& rng);
OneFormField random_alpha(std::size_t n, Rng& rng, int degree = 2);

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t count, Rng& rng,
                                               double half_width = 0.5);
TensorValue random_tensor(std::size_t n, std::vector<projgeom::Slot> variance, Rng& rng);

/// Γ^1_{22} = x3 and nothing else: torsion-free, r = 0, W = R with |W| = 1.
ConnectionSpec witness_connection(std::size_t n);

ConnectionSpec christoffel_from_text(std::size_t n, const std::vector<std::string>& entries);

/// Γ from a chart file in tests/data.
ConnectionSpec data_chart(const std::string& name);
std::string data_path(const std::string& name);

/// [Q∧Id]^l_{kij} = −Q_{ij}δ^l_k − Q_{ik}δ^l_j + Q_{ji}δ^l_k + Q_{jk}δ^l_i.
TensorValue wedge_id_closed(const TensorValue& Q);

/// Constant-curvature closed form R^l_{kij} = δ^l_i g_{jk} − δ^l_j g_{ik}.
TensorValue constant_curvature(const std::vector<double>& g, std::size_t n);

}  // namespace testsupport
