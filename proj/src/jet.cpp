#include "projgeom/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "projgeom/error.hpp"

namespace projgeom {

Jet3::Jet3(std::size_t dim, int order) : dim_(dim), order_(order) {
  if (order < 0 || order > kMaxOrder) {
    throw Error(ErrorKind::ContractViolation,
                "jet order must lie in [0, 3], got " + std::to_string(order));
  }
  if (order >= 1) d1_.assign(dim, 0.0);
  if (order >= 2) d2_.assign(dim * dim, 0.0);
  if (order >= 3) d3_.assign(dim * dim * dim, 0.0);
}

Jet3 Jet3::constant(std::size_t dim, int order, double value) {
  Jet3 j(dim, order);
  j.value_ = value;
  return j;
}

Jet3 Jet3::variable(std::size_t dim, int order, std::size_t index, double value) {
  if (index >= dim) {
    throw Error(ErrorKind::DimensionMismatch, "variable index out of range");
  }
  Jet3 j(dim, order);
  j.value_ = value;
  if (order >= 1) j.d1_[index] = 1.0;
  return j;
}

void Jet3::set_d2(std::size_t i, std::size_t j, double v) {
  d2_[i * dim_ + j] = v;
  d2_[j * dim_ + i] = v;
}

void Jet3::set_d3(std::size_t i, std::size_t j, std::size_t k, double v) {
  const std::size_t n = dim_;
  d3_[(i * n + j) * n + k] = v;
  d3_[(i * n + k) * n + j] = v;
  d3_[(j * n + i) * n + k] = v;
  d3_[(j * n + k) * n + i] = v;
  d3_[(k * n + i) * n + j] = v;
  d3_[(k * n + j) * n + i] = v;
}

Jet3 Jet3::like(const Jet3& a, const Jet3& b) {
  if (a.dim_ != b.dim_) {
    throw Error(ErrorKind::DimensionMismatch, "jets over different numbers of variables");
  }
  return Jet3(a.dim_, std::min(a.order_, b.order_));
}

Jet3 Jet3::derivative(std::size_t i) const {
  if (order_ == 0) {
    throw Error(ErrorKind::MissingJet, "cannot differentiate an order-0 jet");
  }
  Jet3 r(dim_, order_ - 1);
  r.value_ = d1_[i];
  const std::size_t n = dim_;
  if (r.order_ >= 1) {
    for (std::size_t a = 0; a < n; ++a) r.d1_[a] = d2_[i * n + a];
  }
  if (r.order_ >= 2) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) r.d2_[a * n + b] = d3_[(i * n + a) * n + b];
  }
  return r;
}

Jet3 Jet3::truncated(int order) const {
  if (order >= order_) return *this;
  Jet3 r(dim_, order);
  r.value_ = value_;
  if (order >= 1) r.d1_ = d1_;
  if (order >= 2) r.d2_ = d2_;
  return r;
}

Jet3& Jet3::operator+=(const Jet3& other) {
  if (dim_ != other.dim_) {
    throw Error(ErrorKind::DimensionMismatch, "jets over different numbers of variables");
  }
  if (order_ > other.order_) *this = truncated(other.order_);
  value_ += other.value_;
  for (std::size_t a = 0; a < d1_.size(); ++a) d1_[a] += other.d1_[a];
  for (std::size_t a = 0; a < d2_.size(); ++a) d2_[a] += other.d2_[a];
  for (std::size_t a = 0; a < d3_.size(); ++a) d3_[a] += other.d3_[a];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& other) {
  if (dim_ != other.dim_) {
    throw Error(ErrorKind::DimensionMismatch, "jets over different numbers of variables");
  }
  if (order_ > other.order_) *this = truncated(other.order_);
  value_ -= other.value_;
  for (std::size_t a = 0; a < d1_.size(); ++a) d1_[a] -= other.d1_[a];
  for (std::size_t a = 0; a < d2_.size(); ++a) d2_[a] -= other.d2_[a];
  for (std::size_t a = 0; a < d3_.size(); ++a) d3_[a] -= other.d3_[a];
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  value_ *= s;
  for (double& v : d1_) v *= s;
  for (double& v : d2_) v *= s;
  for (double& v : d3_) v *= s;
  return *this;
}

Jet3 operator*(const Jet3& f, const Jet3& g) {
  Jet3 h = Jet3::like(f, g);
  const std::size_t n = h.dim_;
  h.value_ = f.value_ * g.value_;
  if (h.order_ >= 1) {
    for (std::size_t i = 0; i < n; ++i) h.d1_[i] = f.d1_[i] * g.value_ + f.value_ * g.d1_[i];
  }
  if (h.order_ >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        h.set_d2(i, j,
                 f.d2(i, j) * g.value_ + f.d1_[i] * g.d1_[j] + f.d1_[j] * g.d1_[i] +
                     f.value_ * g.d2(i, j));
      }
    }
  }
  if (h.order_ >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
          const double v = f.d3(i, j, k) * g.value_ + f.d2(i, j) * g.d1_[k] +
                           f.d2(i, k) * g.d1_[j] + f.d2(j, k) * g.d1_[i] +
                           f.d1_[i] * g.d2(j, k) + f.d1_[j] * g.d2(i, k) +
                           f.d1_[k] * g.d2(i, j) + f.value_ * g.d3(i, j, k);
          h.set_d3(i, j, k, v);
        }
      }
    }
  }
  return h;
}

Jet3 Jet3::compose(double phi0, double phi1, double phi2, double phi3) const {
  Jet3 h(dim_, order_);
  const std::size_t n = dim_;
  h.value_ = phi0;
  if (order_ >= 1) {
    for (std::size_t i = 0; i < n; ++i) h.d1_[i] = phi1 * d1_[i];
  }
  if (order_ >= 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        h.set_d2(i, j, phi2 * d1_[i] * d1_[j] + phi1 * d2(i, j));
  }
  if (order_ >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
          const double v = phi3 * d1_[i] * d1_[j] * d1_[k] +
                           phi2 * (d2(i, j) * d1_[k] + d2(i, k) * d1_[j] + d2(j, k) * d1_[i]) +
                           phi1 * d3(i, j, k);
          h.set_d3(i, j, k, v);
        }
      }
    }
  }
  return h;
}

namespace {

Jet3 reciprocal(const Jet3& g) {
  const double u = g.value();
  if (u == 0.0) throw Error(ErrorKind::DomainError, "division by zero");
  const double r = 1.0 / u;
  return g.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

}  // namespace

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

Jet3 sin(const Jet3& f) {
  const double s = std::sin(f.value());
  const double c = std::cos(f.value());
  return f.compose(s, c, -s, -c);
}

Jet3 cos(const Jet3& f) {
  const double s = std::sin(f.value());
  const double c = std::cos(f.value());
  return f.compose(c, -s, -c, s);
}

Jet3 exp(const Jet3& f) {
  const double e = std::exp(f.value());
  return f.compose(e, e, e, e);
}

Jet3 log(const Jet3& f) {
  const double u = f.value();
  if (!(u > 0.0)) throw Error(ErrorKind::DomainError, "ln of non-positive argument");
  const double r = 1.0 / u;
  return f.compose(std::log(u), r, -r * r, 2.0 * r * r * r);
}

Jet3 sqrt(const Jet3& f) {
  const double u = f.value();
  if (u < 0.0 || (u == 0.0 && f.order() > 0)) {
    throw Error(ErrorKind::DomainError, "sqrt of negative argument (or zero with derivatives)");
  }
  const double s = std::sqrt(u);
  if (f.order() == 0) return f.compose(s, 0.0, 0.0, 0.0);
  return f.compose(s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u));
}

Jet3 pow_int(const Jet3& f, int exponent) {
  if (exponent == 0) return Jet3::constant(f.dim(), f.order(), 1.0);
  const int m = exponent < 0 ? -exponent : exponent;
  Jet3 r = f;
  for (int k = 1; k < m; ++k) r = r * f;
  if (exponent < 0) return reciprocal(r);
  return r;
}

Jet3 pow_real(const Jet3& f, double p) {
  const double u = f.value();
  if (!(u > 0.0)) {
    throw Error(ErrorKind::DomainError, "non-integer power of non-positive base");
  }
  const double v = std::pow(u, p);
  return f.compose(v, p * v / u, p * (p - 1.0) * v / (u * u),
                   p * (p - 1.0) * (p - 2.0) * v / (u * u * u));
}

}  // namespace projgeom
