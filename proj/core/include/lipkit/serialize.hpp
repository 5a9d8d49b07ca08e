#pragma once

#include <initializer_list>

#include <nlohmann/json.hpp>

#include "lipkit/atomic.hpp"
#include "lipkit/bounds.hpp"
#include "lipkit/frame.hpp"
#include "lipkit/invert.hpp"
#include "lipkit/linalg.hpp"
#include "lipkit/map.hpp"
#include "lipkit/profile.hpp"
#include "lipkit/resolvent.hpp"
#include "lipkit/space.hpp"

namespace lipkit {

using json = nlohmann::json;

// Rejects any key outside required + optional and demands every required
// key; errors name the offending field. Typos in constants are the chief
// hazard of hand-written descriptors, so parsing is strict everywhere.
void check_fields(const json& j, const char* what, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {});

// {dim, p ("inf" for the sup norm), weights?} for lp spaces; the partial-sum
// and direct-sum norms carry a "norm" discriminator plus their defining data
// (atom list / parts, with the max combination flagged).
json space_to_json(const NormedSpace& space);
NormedSpace space_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// {kind, domain/codomain?, matrix?, offset?, family?, params?, children?}.
// Custom evaluators are code-only and refuse to serialize.
json map_to_json(const MapHandle& m);
MapHandle map_from_json(const json& j);

json lip_estimate_to_json(const LipEstimate& est);
json profile_to_json(const PerturbationProfile& profile);
json bound_report_to_json(const BoundReport& report);
json certificate_to_json(const InversionCertificate& cert);
json scan_report_to_json(const ScanReport& report);

json frame_to_json(const MetricFrame& frame);
MetricFrame frame_from_json(const json& j);
json frame_estimate_to_json(const FrameBoundEstimate& est);

json decomposition_to_json(const AtomicDecomposition& dec);
AtomicDecomposition decomposition_from_json(const json& j);
json validation_report_to_json(const ValidationReport& report);
json schauder_report_to_json(const SchauderReport& report);
json dilation_to_json(const DilationResult& result);

}  // namespace lipkit
