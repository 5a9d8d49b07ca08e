#include "lipkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lipkit {

PExponent PExponent::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "l^p exponent must be finite and >= 1, got " << p;
    fail(ErrorKind::domain, msg.str());
  }
  return PExponent(false, p);
}

PExponent PExponent::infinity() { return PExponent(true, 0.0); }

double PExponent::value() const {
  if (infinite_) fail(ErrorKind::internal, "value() called on the infinite exponent");
  return p_;
}

bool PExponent::operator==(const PExponent& other) const noexcept {
  if (infinite_ != other.infinite_) return false;
  return infinite_ || p_ == other.p_;
}

NormDescriptor NormDescriptor::lp(PExponent p) {
  return NormDescriptor(Kind::lp, p);
}

NormDescriptor NormDescriptor::lp_weighted(PExponent p, std::vector<double> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      std::ostringstream msg;
      msg << "norm weight " << i << " must be positive and finite, got " << weights[i];
      fail(ErrorKind::domain, msg.str());
    }
  }
  NormDescriptor d(Kind::lp, p);
  d.weights_ = std::move(weights);
  return d;
}

NormDescriptor NormDescriptor::max_partial_sum(NormedSpace base,
                                               std::vector<std::vector<double>> atoms) {
  if (atoms.empty()) fail(ErrorKind::structural, "max-partial-sum norm needs at least one atom");
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    if (static_cast<int>(atoms[n].size()) != base.dim) {
      std::ostringstream msg;
      msg << "atom " << n << " has " << atoms[n].size() << " coordinates, base dimension is "
          << base.dim;
      fail(ErrorKind::structural, msg.str());
    }
    bool zero = true;
    for (double c : atoms[n]) {
      if (c != 0.0) { zero = false; break; }
    }
    if (zero) {
      std::ostringstream msg;
      msg << "max-partial-sum norm is degenerate: atom " << n
          << " is zero, so the unit coefficient vector e_" << n << " has norm 0";
      fail(ErrorKind::degenerate_norm, msg.str());
    }
  }
  NormDescriptor d(Kind::max_partial_sum, PExponent::finite(2.0));
  d.partial_sum_ = std::make_shared<const MaxPartialSumData>(
      MaxPartialSumData{std::move(base), std::move(atoms)});
  return d;
}

NormDescriptor NormDescriptor::direct_sum_max(std::vector<NormedSpace> parts) {
  if (parts.empty()) fail(ErrorKind::structural, "direct sum needs at least one part");
  for (const NormedSpace& part : parts) {
    if (part.dim <= 0) fail(ErrorKind::structural, "direct-sum part must have positive dimension");
  }
  NormDescriptor d(Kind::direct_sum_max, PExponent::finite(2.0));
  d.direct_sum_ = std::make_shared<const DirectSumData>(DirectSumData{std::move(parts)});
  return d;
}

const PExponent& NormDescriptor::exponent() const {
  if (kind_ != Kind::lp) fail(ErrorKind::internal, "exponent() on a non-lp descriptor");
  return p_;
}

const std::optional<std::vector<double>>& NormDescriptor::weights() const {
  if (kind_ != Kind::lp) fail(ErrorKind::internal, "weights() on a non-lp descriptor");
  return weights_;
}

const MaxPartialSumData& NormDescriptor::partial_sum_data() const {
  if (!partial_sum_) fail(ErrorKind::internal, "partial_sum_data() on a non-partial-sum descriptor");
  return *partial_sum_;
}

const DirectSumData& NormDescriptor::direct_sum_data() const {
  if (!direct_sum_) fail(ErrorKind::internal, "direct_sum_data() on a non-direct-sum descriptor");
  return *direct_sum_;
}

bool NormDescriptor::operator==(const NormDescriptor& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::lp:
      return p_ == other.p_ && weights_ == other.weights_;
    case Kind::max_partial_sum: {
      if (partial_sum_ == other.partial_sum_) return true;
      const auto& a = *partial_sum_;
      const auto& b = *other.partial_sum_;
      return a.base == b.base && a.atoms == b.atoms;
    }
    case Kind::direct_sum_max: {
      if (direct_sum_ == other.direct_sum_) return true;
      return direct_sum_->parts == other.direct_sum_->parts;
    }
  }
  return false;
}

NormedSpace lp_space(int dim, PExponent p) {
  if (dim <= 0) fail(ErrorKind::structural, "space dimension must be positive");
  return NormedSpace{dim, NormDescriptor::lp(p)};
}

NormedSpace l2_space(int dim) { return lp_space(dim, PExponent::finite(2.0)); }

NormedSpace scalar_space() { return l2_space(1); }

Vector make_vector(NormedSpace space, std::vector<double> coords) {
  if (static_cast<int>(coords.size()) != space.dim) {
    std::ostringstream msg;
    msg << "vector has " << coords.size() << " coordinates, space dimension is " << space.dim;
    fail(ErrorKind::structural, msg.str());
  }
  return Vector{std::move(space), std::move(coords)};
}

Vector zero_vector(NormedSpace space) {
  std::vector<double> coords(static_cast<std::size_t>(space.dim), 0.0);
  return Vector{std::move(space), std::move(coords)};
}

namespace {

double lp_norm(const NormDescriptor& d, const std::vector<double>& v) {
  const std::optional<std::vector<double>>& w = d.weights();
  if (d.exponent().is_infinite()) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double term = std::abs(v[i]);
      if (w) term *= (*w)[i];
      best = std::max(best, term);
    }
    return best;
  }
  const double p = d.exponent().value();
  double scale = 0.0;
  for (double c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  if (p == 1.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double term = std::abs(v[i]);
      if (w) term *= (*w)[i];
      sum += term;
    }
    return sum;
  }
  if (p == 2.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double t = v[i] / scale;
      double term = t * t;
      if (w) term *= (*w)[i];
      sum += term;
    }
    return scale * std::sqrt(sum);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = std::abs(v[i]) / scale;
    double term = std::pow(t, p);
    if (w) term *= (*w)[i];
    sum += term;
  }
  return scale * std::pow(sum, 1.0 / p);
}

}  // namespace

double norm_of(const NormedSpace& space, const std::vector<double>& coords) {
  if (static_cast<int>(coords.size()) != space.dim) {
    std::ostringstream msg;
    msg << "norm: vector has " << coords.size() << " coordinates, space dimension is "
        << space.dim;
    fail(ErrorKind::structural, msg.str());
  }
  switch (space.norm.kind()) {
    case NormDescriptor::Kind::lp: {
      const auto& w = space.norm.weights();
      if (w && static_cast<int>(w->size()) != space.dim) {
        fail(ErrorKind::structural, "norm weight list does not match the space dimension");
      }
      return lp_norm(space.norm, coords);
    }
    case NormDescriptor::Kind::max_partial_sum: {
      const MaxPartialSumData& data = space.norm.partial_sum_data();
      if (coords.size() != data.atoms.size()) {
        fail(ErrorKind::structural, "partial-sum norm: coefficient count does not match atom count");
      }
      std::vector<double> partial(static_cast<std::size_t>(data.base.dim), 0.0);
      double best = 0.0;
      for (std::size_t n = 0; n < data.atoms.size(); ++n) {
        for (int i = 0; i < data.base.dim; ++i) {
          partial[static_cast<std::size_t>(i)] +=
              coords[n] * data.atoms[n][static_cast<std::size_t>(i)];
        }
        best = std::max(best, norm_of(data.base, partial));
      }
      return best;
    }
    case NormDescriptor::Kind::direct_sum_max: {
      const DirectSumData& data = space.norm.direct_sum_data();
      std::size_t offset = 0;
      double best = 0.0;
      for (const NormedSpace& part : data.parts) {
        std::vector<double> slice(coords.begin() + static_cast<std::ptrdiff_t>(offset),
                                  coords.begin() + static_cast<std::ptrdiff_t>(offset) +
                                      part.dim);
        best = std::max(best, norm_of(part, slice));
        offset += static_cast<std::size_t>(part.dim);
      }
      if (offset != coords.size()) {
        fail(ErrorKind::structural, "direct-sum parts do not cover the ambient dimension");
      }
      return best;
    }
  }
  fail(ErrorKind::internal, "unreachable norm kind");
}

double norm(const NormedSpace& space, const Vector& v) {
  if (v.space != space) fail(ErrorKind::structural, "norm: vector does not belong to the space");
  return norm_of(space, v.coords);
}

double distance(const NormedSpace& space, const Vector& x, const Vector& y) {
  if (x.space != space || y.space != space) {
    fail(ErrorKind::structural, "distance: vectors do not belong to the space");
  }
  std::vector<double> diff(x.coords.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x.coords[i] - y.coords[i];
  return norm_of(space, diff);
}

Vector seq_embed(const NormedSpace& space, const std::vector<double>& coeffs) {
  if (static_cast<int>(coeffs.size()) > space.dim) {
    std::ostringstream msg;
    msg << "seq_embed: " << coeffs.size() << " coefficients exceed the space dimension "
        << space.dim;
    fail(ErrorKind::structural, msg.str());
  }
  std::vector<double> coords(static_cast<std::size_t>(space.dim), 0.0);
  std::copy(coeffs.begin(), coeffs.end(), coords.begin());
  return Vector{space, std::move(coords)};
}

Vector add(const Vector& x, const Vector& y) {
  if (x.space != y.space) fail(ErrorKind::structural, "add: vectors live in different spaces");
  std::vector<double> coords(x.coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = x.coords[i] + y.coords[i];
  return Vector{x.space, std::move(coords)};
}

Vector sub(const Vector& x, const Vector& y) {
  if (x.space != y.space) fail(ErrorKind::structural, "sub: vectors live in different spaces");
  std::vector<double> coords(x.coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = x.coords[i] - y.coords[i];
  return Vector{x.space, std::move(coords)};
}

Vector scale(double factor, const Vector& x) {
  std::vector<double> coords(x.coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = factor * x.coords[i];
  return Vector{x.space, std::move(coords)};
}

}  // namespace lipkit
