#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "json.hpp"

namespace projgeom {

enum class Slot { Up, Down };

/// Dense tensor at a point: `variance().size()` slots of extent `dim()`,
/// row-major storage (first slot varies slowest). Slots are 0-based.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(std::size_t dim, std::vector<Slot> variance);
  TensorValue(std::size_t dim, std::vector<Slot> variance, std::vector<double> data);

  static TensorValue scalar(double v);
  /// δ^k_i with variance (up, down).
  static TensorValue identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return variance_.size(); }
  const std::vector<Slot>& variance() const noexcept { return variance_; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  double& operator()(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
  double operator()(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }
  double& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
  double at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

  /// Multi-index of the flat position `flat`.
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  TensorValue& operator+=(const TensorValue& other);
  TensorValue& operator-=(const TensorValue& other);
  TensorValue& operator*=(double s);
  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(TensorValue a, double s) { return a *= s; }
  friend TensorValue operator*(double s, TensorValue a) { return a *= s; }

 private:
  template <class Idx>
  std::size_t offset(const Idx& idx) const {
    std::size_t off = 0;
    for (std::size_t i : idx) off = off * dim_ + i;
    return off;
  }
  void check_compatible(const TensorValue& other) const;

  std::size_t dim_ = 0;
  std::vector<Slot> variance_;
  std::vector<double> data_{0.0};
};

/// Sums slot `a` against slot `b` (one up, one down); rank drops by two.
TensorValue contract(const TensorValue& t, std::size_t a, std::size_t b);
/// Exchanges slots `a` and `b` (variance moves with the data).
TensorValue swap_slots(const TensorValue& t, std::size_t a, std::size_t b);
/// Skew part ½(T − T with a,b exchanged); slots must share variance.
TensorValue alt2(const TensorValue& t, std::size_t a, std::size_t b);
/// Symmetric part ½(T + T with a,b exchanged).
TensorValue sym2(const TensorValue& t, std::size_t a, std::size_t b);
/// Tensor product; slots of `a` come first.
TensorValue outer(const TensorValue& a, const TensorValue& b);
/// Maximum absolute entry.
double norm(const TensorValue& t);

void to_json(nlohmann::json& j, const TensorValue& t);
void from_json(const nlohmann::json& j, TensorValue& t);

}  // namespace projgeom
