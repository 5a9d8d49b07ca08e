#include "lipkit/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lipkit {

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::affine: return "affine";
    case MapKind::componentwise: return "componentwise";
    case MapKind::composite: return "composite";
    case MapKind::inverse_of: return "inverse-of";
    case MapKind::custom: return "custom";
    case MapKind::translated: return "translated";
    case MapKind::analysis: return "analysis";
  }
  return "unknown";
}

const MapData& MapHandle::raw() const {
  if (!data_) fail(ErrorKind::internal, "use of an empty map handle");
  return *data_;
}

Vector MapHandle::operator()(const Vector& x) const { return evaluate(*this, x); }

MapHandle make_map(std::shared_ptr<MapData> data) {
  return MapHandle(std::shared_ptr<const MapData>(std::move(data)));
}

MapHandle affine_map(NormedSpace domain, NormedSpace codomain, Matrix linear,
                     std::vector<double> offset) {
  if (linear.rows != codomain.dim || linear.cols != domain.dim) {
    std::ostringstream msg;
    msg << "affine map: matrix is " << linear.rows << "x" << linear.cols
        << ", expected " << codomain.dim << "x" << domain.dim;
    fail(ErrorKind::structural, msg.str());
  }
  if (static_cast<int>(offset.size()) != codomain.dim) {
    fail(ErrorKind::structural, "affine map: offset length does not match the codomain");
  }
  auto data = std::make_shared<MapData>();
  data->domain = std::move(domain);
  data->codomain = std::move(codomain);
  data->kind = MapKind::affine;
  data->affine = AffineData{linear, offset};
  if (linear.rows == linear.cols && is_invertible(linear)) {
    Matrix inv = invert(linear);
    std::vector<double> inv_offset = matvec(inv, offset);
    for (double& v : inv_offset) v = -v;
    data->inverse_affine = AffineData{std::move(inv), std::move(inv_offset)};
  }
  Matrix a = linear;
  std::vector<double> c = offset;
  data->eval = [a, c](const std::vector<double>& x) {
    std::vector<double> y = matvec(a, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c[i];
    return y;
  };
  return make_map(std::move(data));
}

MapHandle linear_map(NormedSpace domain, NormedSpace codomain, Matrix linear) {
  std::vector<double> zero(static_cast<std::size_t>(codomain.dim), 0.0);
  return affine_map(std::move(domain), std::move(codomain), std::move(linear), std::move(zero));
}

MapHandle identity_map(const NormedSpace& space) {
  return linear_map(space, space, Matrix::identity(space.dim));
}

MapHandle componentwise_map(const NormedSpace& space, const std::string& family, double eps,
                            double beta) {
  if (family != "tanh" && family != "sin") {
    fail(ErrorKind::unsupported, "componentwise family must be \"tanh\" or \"sin\", got \"" +
                                     family + "\"");
  }
  if (!std::isfinite(eps) || !std::isfinite(beta)) {
    fail(ErrorKind::domain, "componentwise parameters must be finite");
  }
  auto data = std::make_shared<MapData>();
  data->domain = space;
  data->codomain = space;
  data->kind = MapKind::componentwise;
  data->componentwise = ComponentwiseData{family, eps, beta, 0.0};
  const bool use_tanh = family == "tanh";
  data->eval = [use_tanh, eps, beta](const std::vector<double>& x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double g = use_tanh ? std::tanh(beta * x[i]) : std::sin(beta * x[i]);
      y[i] = x[i] + eps * g;
    }
    return y;
  };
  return make_map(std::move(data));
}

MapHandle soft_threshold_map(const NormedSpace& space, double threshold) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    fail(ErrorKind::domain, "soft-threshold level must be nonnegative and finite");
  }
  auto data = std::make_shared<MapData>();
  data->domain = space;
  data->codomain = space;
  data->kind = MapKind::componentwise;
  data->componentwise = ComponentwiseData{"soft-threshold", 0.0, 0.0, threshold};
  data->eval = [threshold](const std::vector<double>& x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double mag = std::abs(x[i]) - threshold;
      y[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return y;
  };
  return make_map(std::move(data));
}

MapHandle compose(std::vector<MapHandle> pipeline) {
  if (pipeline.empty()) fail(ErrorKind::structural, "compose: empty pipeline");
  for (std::size_t i = 0; i + 1 < pipeline.size(); ++i) {
    if (pipeline[i].codomain() != pipeline[i + 1].domain()) {
      std::ostringstream msg;
      msg << "compose: codomain of stage " << i << " does not match domain of stage " << i + 1;
      fail(ErrorKind::structural, msg.str());
    }
  }
  auto data = std::make_shared<MapData>();
  data->domain = pipeline.front().domain();
  data->codomain = pipeline.back().codomain();
  data->kind = MapKind::composite;
  data->serializable = std::all_of(pipeline.begin(), pipeline.end(),
                                   [](const MapHandle& m) { return m.raw().serializable; });
  std::vector<MapHandle> stages = pipeline;
  data->eval = [stages](const std::vector<double>& x) {
    std::vector<double> v = x;
    for (const MapHandle& stage : stages) v = stage.raw().eval(v);
    return v;
  };
  data->children = std::move(pipeline);
  return make_map(std::move(data));
}

MapHandle custom_map(NormedSpace domain, NormedSpace codomain, RawEvaluator eval,
                     std::string label) {
  if (!eval) fail(ErrorKind::structural, "custom map: missing evaluator");
  auto data = std::make_shared<MapData>();
  data->domain = std::move(domain);
  data->codomain = std::move(codomain);
  data->kind = MapKind::custom;
  data->eval = std::move(eval);
  data->label = std::move(label);
  data->serializable = false;
  return make_map(std::move(data));
}

MapHandle analysis_stack(std::vector<MapHandle> functionals, NormedSpace seq_space) {
  if (functionals.empty()) fail(ErrorKind::structural, "analysis stack: no functionals");
  const NormedSpace& dom = functionals.front().domain();
  for (std::size_t n = 0; n < functionals.size(); ++n) {
    if (functionals[n].codomain().dim != 1) {
      std::ostringstream msg;
      msg << "analysis stack: functional " << n << " is not scalar-valued";
      fail(ErrorKind::structural, msg.str());
    }
    if (functionals[n].domain() != dom) {
      std::ostringstream msg;
      msg << "analysis stack: functional " << n << " has a different domain";
      fail(ErrorKind::structural, msg.str());
    }
  }
  if (static_cast<int>(functionals.size()) > seq_space.dim) {
    fail(ErrorKind::structural, "analysis stack: more functionals than sequence dimensions");
  }
  auto data = std::make_shared<MapData>();
  data->domain = dom;
  data->codomain = seq_space;
  data->kind = MapKind::analysis;
  data->serializable = std::all_of(functionals.begin(), functionals.end(),
                                   [](const MapHandle& m) { return m.raw().serializable; });
  const std::size_t seq_dim = static_cast<std::size_t>(seq_space.dim);
  std::vector<MapHandle> fns = functionals;
  data->eval = [fns, seq_dim](const std::vector<double>& x) {
    std::vector<double> y(seq_dim, 0.0);
    for (std::size_t n = 0; n < fns.size(); ++n) y[n] = fns[n].raw().eval(x)[0];
    return y;
  };
  data->functionals = std::move(functionals);
  return make_map(std::move(data));
}

MapHandle with_inverse(const MapHandle& m, const MapHandle& inverse) {
  if (inverse.domain() != m.codomain() || inverse.codomain() != m.domain()) {
    fail(ErrorKind::structural, "with_inverse: spaces of the inverse do not mirror the map");
  }
  auto data = std::make_shared<MapData>(m.raw());
  data->user_inverse = inverse;
  return make_map(std::move(data));
}

namespace {

MapHandle shift_map(const NormedSpace& space, const std::vector<double>& shift) {
  return affine_map(space, space, Matrix::identity(space.dim), shift);
}

}  // namespace

std::optional<MapHandle> inverse_of(const MapHandle& m) {
  const MapData& d = m.raw();
  if (d.user_inverse) return d.user_inverse;
  if (d.kind == MapKind::inverse_of) return d.children.at(0);
  if (d.inverse_affine) {
    MapHandle inv = affine_map(d.codomain, d.domain, d.inverse_affine->linear,
                               d.inverse_affine->offset);
    return inv;
  }
  if (d.kind == MapKind::composite) {
    std::vector<MapHandle> inverses;
    inverses.reserve(d.children.size());
    for (auto it = d.children.rbegin(); it != d.children.rend(); ++it) {
      std::optional<MapHandle> inv = inverse_of(*it);
      if (!inv) return std::nullopt;
      inverses.push_back(*inv);
    }
    return compose(std::move(inverses));
  }
  if (d.kind == MapKind::translated) {
    std::optional<MapHandle> base_inv = inverse_of(d.children.at(0));
    if (!base_inv) return std::nullopt;
    return compose({shift_map(d.codomain, d.value_at_zero), *base_inv});
  }
  return std::nullopt;
}

MapHandle translate_to_origin(const MapHandle& m) {
  const MapData& d = m.raw();
  std::vector<double> zero(static_cast<std::size_t>(d.domain.dim), 0.0);
  std::vector<double> at_zero = d.eval(zero);
  const bool already_centered =
      std::all_of(at_zero.begin(), at_zero.end(), [](double v) { return v == 0.0; });
  if (already_centered) return m;

  auto data = std::make_shared<MapData>();
  data->domain = d.domain;
  data->codomain = d.codomain;
  data->kind = MapKind::translated;
  data->serializable = d.serializable;
  data->value_at_zero = at_zero;
  if (d.affine) {
    std::vector<double> no_offset(static_cast<std::size_t>(d.codomain.dim), 0.0);
    data->affine = AffineData{d.affine->linear, no_offset};
    if (d.inverse_affine) {
      std::vector<double> inv_no_offset(static_cast<std::size_t>(d.domain.dim), 0.0);
      data->inverse_affine = AffineData{d.inverse_affine->linear, inv_no_offset};
    }
  }
  MapHandle base = m;
  std::vector<double> m0 = at_zero;
  data->eval = [base, m0](const std::vector<double>& x) {
    std::vector<double> y = base.raw().eval(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= m0[i];
    return y;
  };
  data->children.push_back(std::move(base));
  return make_map(std::move(data));
}

Vector evaluate(const MapHandle& m, const Vector& x) {
  const MapData& d = m.raw();
  if (x.space != d.domain) {
    fail(ErrorKind::structural, "evaluate: input does not belong to the map's domain");
  }
  std::vector<double> y = d.eval(x.coords);
  if (static_cast<int>(y.size()) != d.codomain.dim) {
    fail(ErrorKind::internal, "evaluator produced output of the wrong dimension");
  }
  return Vector{d.codomain, std::move(y)};
}

Vector map_difference(const MapHandle& m, const Vector& x, const Vector& y) {
  const MapData& d = m.raw();
  if (d.kind == MapKind::translated) {
    Vector diff = map_difference(d.children.at(0), x, y);
    return diff;
  }
  Vector fx = evaluate(m, x);
  Vector fy = evaluate(m, y);
  return sub(fx, fy);
}

LipEstimate lip_estimate(const MapHandle& m, const SamplerConfig& cfg) {
  const std::vector<Vector> points = sample_points(m.domain(), cfg);
  const std::vector<std::pair<int, int>> pairs =
      sample_pairs(static_cast<int>(points.size()), cfg);

  LipEstimate est;
  est.sample_seed = cfg.seed;
  est.lower = 0.0;
  est.bilip_lower = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  // Quotients go through map_difference pair by pair (no per-point caching of
  // images): translated handles must reproduce their base map's quotients
  // bit-for-bit, which precomputed images would break.
  for (const auto& [i, j] : pairs) {
    const Vector& x = points[static_cast<std::size_t>(i)];
    const Vector& y = points[static_cast<std::size_t>(j)];
    const double den = distance(m.domain(), x, y);
    if (den == 0.0) continue;
    const Vector diff = map_difference(m, x, y);
    const double num = norm_of(m.codomain(), diff.coords);
    const double q = num / den;
    est.lower = std::max(est.lower, q);
    est.bilip_lower = std::min(est.bilip_lower, q);
    ++used;
  }
  if (used == 0) {
    fail(ErrorKind::degenerate_sample,
         "lip_estimate: all sampled points coincide, no usable pairs");
  }
  est.pair_count = used;
  return est;
}

namespace {

bool plain_lp(const NormedSpace& s, double* p_out) {
  if (s.norm.kind() != NormDescriptor::Kind::lp) return false;
  if (s.norm.weights()) return false;
  if (s.norm.exponent().is_infinite()) {
    *p_out = std::numeric_limits<double>::infinity();
    return true;
  }
  *p_out = s.norm.exponent().value();
  return true;
}

}  // namespace

bool lip_exact_supported(const MapHandle& m) {
  const MapData& d = m.raw();
  if (!d.affine) return false;
  double pd = 0.0;
  double pc = 0.0;
  if (!plain_lp(d.domain, &pd) || !plain_lp(d.codomain, &pc)) return false;
  if (pd != pc) return false;
  return pd == 1.0 || pd == 2.0 || std::isinf(pd);
}

double lip_exact_affine(const MapHandle& m) {
  const MapData& d = m.raw();
  if (!d.affine) {
    fail(ErrorKind::unsupported,
         std::string("lip_exact_affine: handle of kind ") + map_kind_name(d.kind) +
             " carries no affine data");
  }
  if (!lip_exact_supported(m)) {
    fail(ErrorKind::unsupported,
         "lip_exact_affine: needs unweighted l^p with p in {1, 2, inf} and matching "
         "exponents on both sides");
  }
  const Matrix& a = d.affine->linear;
  if (d.domain.norm.exponent().is_infinite()) return induced_norm_linf(a);
  const double p = d.domain.norm.exponent().value();
  if (p == 1.0) return induced_norm_l1(a);
  return power_sigma_max(a, 1e-10);
}

}  // namespace lipkit
