#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lipkit/linalg.hpp"
#include "lipkit/sampler.hpp"
#include "lipkit/space.hpp"

namespace lipkit {

struct MapData;

enum class MapKind {
  affine,
  componentwise,
  composite,
  inverse_of,
  custom,
  // Structural kinds beyond the basic five: `translated` preserves pairwise
  // differences of its base map bit-for-bit (see map_difference), `analysis`
  // stacks scalar functionals into a sequence-space map and stays
  // serializable where a custom closure would not.
  translated,
  analysis,
};

const char* map_kind_name(MapKind kind);

struct AffineData {
  Matrix linear;
  std::vector<double> offset;
};

// x_i -> x_i + eps * g(beta * x_i) for g in {tanh, sin}, or soft-threshold
// shrinkage with the given threshold.
struct ComponentwiseData {
  std::string family;
  double eps = 0.0;
  double beta = 0.0;
  double threshold = 0.0;
};

// Constants and solver settings baked into a certified-inverse handle; kept
// as plain numbers here so the handle stays serializable without dragging
// the solver types into this header.
struct InverseOfData {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double target_residual = 1e-10;
  int max_iterations = 10000;
  int restarts = 8;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
};

// Memo for inverse evaluations: each one is an iterative solve, deterministic
// in its input, and repeated heavily by frame/decomposition estimators.
struct EvalCache {
  std::mutex mutex;
  std::map<std::vector<double>, std::vector<double>> values;
};

using RawEvaluator = std::function<std::vector<double>(const std::vector<double>&)>;

// Immutable shared handle to a map between normed spaces. Copies are cheap
// and alias the same underlying data.
class MapHandle {
 public:
  MapHandle() = default;
  explicit MapHandle(std::shared_ptr<const MapData> data) : data_(std::move(data)) {}

  bool valid() const { return static_cast<bool>(data_); }
  const MapData& raw() const;
  const NormedSpace& domain() const;
  const NormedSpace& codomain() const;
  MapKind kind() const;

  Vector operator()(const Vector& x) const;

 private:
  std::shared_ptr<const MapData> data_;
};

struct MapData {
  NormedSpace domain;
  NormedSpace codomain;
  MapKind kind = MapKind::custom;
  RawEvaluator eval;
  std::optional<AffineData> affine;          // affine kind and translated-of-affine
  std::optional<AffineData> inverse_affine;  // exact inverse when the linear part allows it
  std::optional<ComponentwiseData> componentwise;
  std::optional<InverseOfData> inverse_of;
  std::vector<MapHandle> children;     // composite pipeline / translated base / inverse-of {target, reference}
  std::vector<MapHandle> functionals;  // analysis stack
  std::vector<double> value_at_zero;   // translated
  std::string label;
  bool serializable = true;
  std::optional<MapHandle> user_inverse;
  std::shared_ptr<EvalCache> cache;
};

inline const NormedSpace& MapHandle::domain() const { return raw().domain; }
inline const NormedSpace& MapHandle::codomain() const { return raw().codomain; }
inline MapKind MapHandle::kind() const { return raw().kind; }

MapHandle affine_map(NormedSpace domain, NormedSpace codomain, Matrix linear,
                     std::vector<double> offset);
MapHandle linear_map(NormedSpace domain, NormedSpace codomain, Matrix linear);
MapHandle identity_map(const NormedSpace& space);
// family "tanh" or "sin": x + eps * g(beta x), componentwise.
MapHandle componentwise_map(const NormedSpace& space, const std::string& family, double eps,
                            double beta);
MapHandle soft_threshold_map(const NormedSpace& space, double threshold);
// Pipeline composition: the first handle is applied first.
MapHandle compose(std::vector<MapHandle> pipeline);
MapHandle custom_map(NormedSpace domain, NormedSpace codomain, RawEvaluator eval,
                     std::string label);
// x -> (f_0(x), ..., f_{N-1}(x), 0, ...) in seq_space; every functional must
// be scalar-valued on a common domain.
MapHandle analysis_stack(std::vector<MapHandle> functionals, NormedSpace seq_space);
// Attaches a user-supplied inverse (one direction only).
MapHandle with_inverse(const MapHandle& m, const MapHandle& inverse);
// Internal factory used by the certified-inverse builder.
MapHandle make_map(std::shared_ptr<MapData> data);

// Exact inverse when one is derivable: user-attached, affine, composite of
// invertibles, translated-of-invertible, or the target of a certified
// inverse. Empty otherwise.
std::optional<MapHandle> inverse_of(const MapHandle& m);

// m~ with m~(x) = m(x) - m(0). Differences, and therefore every Lipschitz
// quotient, are delegated to the base map and match it bit-for-bit. Returns
// m itself when m(0) is exactly zero.
MapHandle translate_to_origin(const MapHandle& m);

Vector evaluate(const MapHandle& m, const Vector& x);
// m(x) - m(y). For translated handles this is computed on the base map, so
// the identity m~(x) - m~(y) = m(x) - m(y) holds exactly, not just up to
// rounding.
Vector map_difference(const MapHandle& m, const Vector& x, const Vector& y);

struct LipEstimate {
  double lower = 0.0;        // max sampled quotient: certified lower bound of Lip
  double bilip_lower = 0.0;  // min sampled quotient: upper bound of the expansion floor
  std::size_t pair_count = 0;
  std::uint64_t sample_seed = 0;
};

LipEstimate lip_estimate(const MapHandle& m, const SamplerConfig& cfg);

bool lip_exact_supported(const MapHandle& m);
// Exact operator norm of the linear part for p in {1, 2, inf}, unweighted,
// same exponent on both sides: max column sum, power iteration at 1e-10
// relative residual, max row sum respectively.
double lip_exact_affine(const MapHandle& m);

}  // namespace lipkit
