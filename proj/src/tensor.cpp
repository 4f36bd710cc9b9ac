#include "projgeom/tensor.hpp"

#include <cmath>
#include <string>

#include "json.hpp"

#include "projgeom/error.hpp"

namespace projgeom {

namespace {

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

void check_slot(const TensorValue& t, std::size_t s) {
  if (s >= t.rank()) {
    throw Error(ErrorKind::SlotOutOfRange,
                "slot " + std::to_string(s) + " of a rank-" + std::to_string(t.rank()) + " tensor");
  }
}

}  // namespace

TensorValue::TensorValue(std::size_t dim, std::vector<Slot> variance)
    : dim_(dim), variance_(std::move(variance)), data_(ipow(dim, variance_.size()), 0.0) {}

TensorValue::TensorValue(std::size_t dim, std::vector<Slot> variance, std::vector<double> data)
    : dim_(dim), variance_(std::move(variance)), data_(std::move(data)) {
  if (data_.size() != ipow(dim_, variance_.size())) {
    throw Error(ErrorKind::DimensionMismatch, "tensor data length must be dim^rank");
  }
}

TensorValue TensorValue::scalar(double v) { return TensorValue(0, {}, {v}); }

TensorValue TensorValue::identity(std::size_t dim) {
  TensorValue t(dim, {Slot::Up, Slot::Down});
  for (std::size_t i = 0; i < dim; ++i) t({i, i}) = 1.0;
  return t;
}

std::vector<std::size_t> TensorValue::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(rank());
  for (std::size_t s = rank(); s-- > 0;) {
    idx[s] = flat % dim_;
    flat /= dim_;
  }
  return idx;
}

void TensorValue::check_compatible(const TensorValue& other) const {
  if (dim_ != other.dim_ || variance_ != other.variance_) {
    throw Error(ErrorKind::VarianceMismatch, "tensors of different shape or variance");
  }
}

TensorValue& TensorValue::operator+=(const TensorValue& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

TensorValue& TensorValue::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

TensorValue contract(const TensorValue& t, std::size_t a, std::size_t b) {
  check_slot(t, a);
  check_slot(t, b);
  if (a == b) throw Error(ErrorKind::SlotOutOfRange, "cannot contract a slot with itself");
  if (t.variance()[a] == t.variance()[b]) {
    throw Error(ErrorKind::VarianceMismatch, "contraction needs one up and one down slot");
  }
  std::vector<Slot> var;
  for (std::size_t s = 0; s < t.rank(); ++s) {
    if (s != a && s != b) var.push_back(t.variance()[s]);
  }
  TensorValue r(t.dim(), var);
  const std::size_t n = t.dim();
  std::vector<std::size_t> full(t.rank());
  for (std::size_t flat = 0; flat < r.data().size(); ++flat) {
    const std::vector<std::size_t> ridx = r.unflatten(flat);
    for (std::size_t s = 0, k = 0; s < t.rank(); ++s) {
      if (s != a && s != b) full[s] = ridx[k++];
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      full[a] = m;
      full[b] = m;
      sum += t.at(full);
    }
    r.data()[flat] = sum;
  }
  return r;
}

TensorValue swap_slots(const TensorValue& t, std::size_t a, std::size_t b) {
  check_slot(t, a);
  check_slot(t, b);
  std::vector<Slot> var = t.variance();
  std::swap(var[a], var[b]);
  TensorValue r(t.dim(), var);
  for (std::size_t flat = 0; flat < t.data().size(); ++flat) {
    std::vector<std::size_t> idx = t.unflatten(flat);
    std::swap(idx[a], idx[b]);
    r.at(idx) = t.data()[flat];
  }
  return r;
}

namespace {

TensorValue sym_or_alt(const TensorValue& t, std::size_t a, std::size_t b, double sign) {
  check_slot(t, a);
  check_slot(t, b);
  if (t.variance()[a] != t.variance()[b]) {
    throw Error(ErrorKind::VarianceMismatch, "(anti)symmetrisation needs slots of equal variance");
  }
  TensorValue r(t.dim(), t.variance());
  for (std::size_t flat = 0; flat < t.data().size(); ++flat) {
    std::vector<std::size_t> idx = t.unflatten(flat);
    std::swap(idx[a], idx[b]);
    r.data()[flat] = 0.5 * (t.data()[flat] + sign * t.at(idx));
  }
  return r;
}

}  // namespace

TensorValue alt2(const TensorValue& t, std::size_t a, std::size_t b) {
  return sym_or_alt(t, a, b, -1.0);
}

TensorValue sym2(const TensorValue& t, std::size_t a, std::size_t b) {
  return sym_or_alt(t, a, b, 1.0);
}

TensorValue outer(const TensorValue& a, const TensorValue& b) {
  if (a.rank() > 0 && b.rank() > 0 && a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "outer product of tensors over different dimensions");
  }
  std::vector<Slot> var = a.variance();
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  TensorValue r(a.rank() > 0 ? a.dim() : b.dim(), var);
  const std::size_t nb = b.data().size();
  for (std::size_t i = 0; i < a.data().size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) r.data()[i * nb + j] = a.data()[i] * b.data()[j];
  return r;
}

double norm(const TensorValue& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

void to_json(nlohmann::json& j, const TensorValue& t) {
  nlohmann::json var = nlohmann::json::array();
  for (Slot s : t.variance()) var.push_back(s == Slot::Up ? "up" : "down");
  j = nlohmann::json{{"variance", var}, {"n", t.dim()}, {"data", t.data()}};
}

void from_json(const nlohmann::json& j, TensorValue& t) {
  std::vector<Slot> var;
  for (const auto& s : j.at("variance")) {
    const std::string v = s.get<std::string>();
    if (v == "up") {
      var.push_back(Slot::Up);
    } else if (v == "down") {
      var.push_back(Slot::Down);
    } else {
      throw Error(ErrorKind::VarianceMismatch, "unknown slot kind '" + v + "'");
    }
  }
  t = TensorValue(j.at("n").get<std::size_t>(), std::move(var),
                  j.at("data").get<std::vector<double>>());
}

}  // namespace projgeom
