#include "lipkit/serialize.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "lipkit/error.hpp"

namespace lipkit {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorKind::parse, msg); }

double get_double(const json& j, const char* field, const char* what) {
  const auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    parse_fail(std::string(what) + ": field \"" + field + "\" must be a number");
  }
  return it->get<double>();
}

int get_int(const json& j, const char* field, const char* what) {
  const auto it = j.find(field);
  if (it == j.end() || !it->is_number_integer()) {
    parse_fail(std::string(what) + ": field \"" + field + "\" must be an integer");
  }
  return it->get<int>();
}

std::string get_string(const json& j, const char* field, const char* what) {
  const auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    parse_fail(std::string(what) + ": field \"" + field + "\" must be a string");
  }
  return it->get<std::string>();
}

std::vector<double> get_number_array(const json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& entry : j) {
    if (!entry.is_number()) parse_fail(std::string(what) + " must contain only numbers");
    out.push_back(entry.get<double>());
  }
  return out;
}

}  // namespace

void check_fields(const json& j, const char* what, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!j.is_object()) parse_fail(std::string(what) + " descriptor must be a JSON object");
  for (const char* field : required) {
    if (!j.contains(field)) {
      parse_fail(std::string(what) + ": missing required field \"" + field + "\"");
    }
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    auto in = [&key](std::initializer_list<const char*> list) {
      return std::any_of(list.begin(), list.end(),
                         [&key](const char* f) { return key == f; });
    };
    if (!in(required) && !in(optional)) {
      parse_fail(std::string(what) + ": unknown field \"" + key + "\"");
    }
  }
}

json space_to_json(const NormedSpace& space) {
  json j;
  switch (space.norm.kind()) {
    case NormDescriptor::Kind::lp: {
      j["dim"] = space.dim;
      if (space.norm.exponent().is_infinite()) {
        j["p"] = "inf";
      } else {
        j["p"] = space.norm.exponent().value();
      }
      if (space.norm.weights()) j["weights"] = *space.norm.weights();
      return j;
    }
    case NormDescriptor::Kind::max_partial_sum: {
      const MaxPartialSumData& data = space.norm.partial_sum_data();
      j["dim"] = space.dim;
      j["norm"] = "max-partial-sum";
      j["base"] = space_to_json(data.base);
      j["atoms"] = data.atoms;
      return j;
    }
    case NormDescriptor::Kind::direct_sum_max: {
      j["dim"] = space.dim;
      j["norm"] = "direct-sum-max";
      j["combination"] = "max";
      json parts = json::array();
      for (const NormedSpace& part : space.norm.direct_sum_data().parts) {
        parts.push_back(space_to_json(part));
      }
      j["parts"] = std::move(parts);
      return j;
    }
  }
  fail(ErrorKind::internal, "unreachable norm kind");
}

NormedSpace space_from_json(const json& j) {
  if (!j.is_object()) parse_fail("space descriptor must be a JSON object");
  if (j.contains("norm")) {
    std::string kind = get_string(j, "norm", "space");
    if (kind == "max-partial-sum") {
      check_fields(j, "space", {"dim", "norm", "base", "atoms"});
      NormedSpace base = space_from_json(j.at("base"));
      if (!j.at("atoms").is_array()) parse_fail("space: \"atoms\" must be an array");
      std::vector<std::vector<double>> atoms;
      for (const auto& entry : j.at("atoms")) {
        atoms.push_back(get_number_array(entry, "space: atom"));
      }
      int dim = get_int(j, "dim", "space");
      if (dim != static_cast<int>(atoms.size())) {
        parse_fail("space: partial-sum dim must equal the atom count");
      }
      return NormedSpace{dim, NormDescriptor::max_partial_sum(std::move(base), std::move(atoms))};
    }
    if (kind == "direct-sum-max") {
      check_fields(j, "space", {"dim", "norm", "parts", "combination"});
      if (get_string(j, "combination", "space") != "max") {
        parse_fail("space: only the \"max\" direct-sum combination is supported");
      }
      if (!j.at("parts").is_array() || j.at("parts").empty()) {
        parse_fail("space: \"parts\" must be a nonempty array");
      }
      std::vector<NormedSpace> parts;
      int total = 0;
      for (const auto& entry : j.at("parts")) {
        parts.push_back(space_from_json(entry));
        total += parts.back().dim;
      }
      int dim = get_int(j, "dim", "space");
      if (dim != total) parse_fail("space: direct-sum dim must equal the sum of part dims");
      return NormedSpace{dim, NormDescriptor::direct_sum_max(std::move(parts))};
    }
    parse_fail("space: unknown norm kind \"" + kind + "\"");
  }
  check_fields(j, "space", {"dim", "p"}, {"weights"});
  int dim = get_int(j, "dim", "space");
  if (dim <= 0) parse_fail("space: dim must be positive");
  PExponent p = PExponent::infinity();
  const json& pj = j.at("p");
  if (pj.is_string()) {
    if (pj.get<std::string>() != "inf") {
      parse_fail("space: \"p\" must be a number >= 1 or the string \"inf\"");
    }
  } else if (pj.is_number()) {
    p = PExponent::finite(pj.get<double>());
  } else {
    parse_fail("space: \"p\" must be a number >= 1 or the string \"inf\"");
  }
  if (j.contains("weights")) {
    auto weights = get_number_array(j.at("weights"), "space: weights");
    if (static_cast<int>(weights.size()) != dim) {
      parse_fail("space: weight count must equal dim");
    }
    return NormedSpace{dim, NormDescriptor::lp_weighted(p, std::move(weights))};
  }
  return NormedSpace{dim, NormDescriptor::lp(p)};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("matrix must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& entry : j) rows.push_back(get_number_array(entry, "matrix row"));
  const std::size_t cols = rows.front().size();
  if (cols == 0) parse_fail("matrix rows must be nonempty");
  for (const auto& row : rows) {
    if (row.size() != cols) parse_fail("matrix rows must all have the same length");
  }
  Matrix m = Matrix::zero(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols; ++k) m.at(static_cast<int>(i), static_cast<int>(k)) = rows[i][k];
  }
  return m;
}

json map_to_json(const MapHandle& m) {
  if (!m.valid()) fail(ErrorKind::structural, "cannot serialize an empty map handle");
  const MapData& d = m.raw();
  if (!d.serializable) {
    std::string name = d.label.empty() ? map_kind_name(d.kind) : d.label;
    fail(ErrorKind::unsupported, "map \"" + name + "\" is code-only and does not serialize");
  }
  json j;
  j["kind"] = map_kind_name(d.kind);
  switch (d.kind) {
    case MapKind::affine: {
      j["domain"] = space_to_json(d.domain);
      j["codomain"] = space_to_json(d.codomain);
      j["matrix"] = matrix_to_json(d.affine->linear);
      j["offset"] = d.affine->offset;
      return j;
    }
    case MapKind::componentwise: {
      j["domain"] = space_to_json(d.domain);
      j["family"] = d.componentwise->family;
      if (d.componentwise->family == "soft-threshold") {
        j["params"] = json{{"threshold", d.componentwise->threshold}};
      } else {
        j["params"] = json{{"eps", d.componentwise->eps}, {"beta", d.componentwise->beta}};
      }
      return j;
    }
    case MapKind::composite:
    case MapKind::translated: {
      json children = json::array();
      for (const auto& child : d.children) children.push_back(map_to_json(child));
      j["children"] = std::move(children);
      return j;
    }
    case MapKind::analysis: {
      json children = json::array();
      for (const auto& f : d.functionals) children.push_back(map_to_json(f));
      j["children"] = std::move(children);
      j["seq_space"] = space_to_json(d.codomain);
      return j;
    }
    case MapKind::inverse_of: {
      json children = json::array();
      for (const auto& child : d.children) children.push_back(map_to_json(child));
      j["children"] = std::move(children);
      const InverseOfData& inv = *d.inverse_of;
      j["params"] = json{{"lambda1", inv.lambda1},
                         {"lambda2", inv.lambda2},
                         {"target_residual", inv.target_residual},
                         {"max_iterations", inv.max_iterations},
                         {"restarts", inv.restarts},
                         {"fd_step", inv.fd_step},
                         {"seed", inv.seed}};
      return j;
    }
    case MapKind::custom: break;
  }
  fail(ErrorKind::internal, "unreachable map kind in serialization");
}

MapHandle map_from_json(const json& j) {
  if (!j.is_object()) parse_fail("map descriptor must be a JSON object");
  std::string kind = get_string(j, "kind", "map");
  if (kind == "affine") {
    check_fields(j, "affine map", {"kind", "domain", "codomain", "matrix", "offset"});
    return affine_map(space_from_json(j.at("domain")), space_from_json(j.at("codomain")),
                      matrix_from_json(j.at("matrix")),
                      get_number_array(j.at("offset"), "map: offset"));
  }
  if (kind == "componentwise") {
    check_fields(j, "componentwise map", {"kind", "domain", "family", "params"});
    NormedSpace space = space_from_json(j.at("domain"));
    std::string family = get_string(j, "family", "map");
    const json& params = j.at("params");
    if (family == "soft-threshold") {
      check_fields(params, "soft-threshold params", {"threshold"});
      return soft_threshold_map(space, get_double(params, "threshold", "map"));
    }
    check_fields(params, "componentwise params", {"eps", "beta"});
    return componentwise_map(space, family, get_double(params, "eps", "map"),
                             get_double(params, "beta", "map"));
  }
  if (kind == "composite") {
    check_fields(j, "composite map", {"kind", "children"});
    if (!j.at("children").is_array() || j.at("children").empty()) {
      parse_fail("composite map: \"children\" must be a nonempty array");
    }
    std::vector<MapHandle> pipeline;
    for (const auto& entry : j.at("children")) pipeline.push_back(map_from_json(entry));
    return compose(std::move(pipeline));
  }
  if (kind == "translated") {
    check_fields(j, "translated map", {"kind", "children"});
    if (!j.at("children").is_array() || j.at("children").size() != 1) {
      parse_fail("translated map: \"children\" must hold exactly one map");
    }
    return translate_to_origin(map_from_json(j.at("children").front()));
  }
  if (kind == "analysis") {
    check_fields(j, "analysis map", {"kind", "children", "seq_space"});
    if (!j.at("children").is_array() || j.at("children").empty()) {
      parse_fail("analysis map: \"children\" must be a nonempty array");
    }
    std::vector<MapHandle> functionals;
    for (const auto& entry : j.at("children")) functionals.push_back(map_from_json(entry));
    return analysis_stack(std::move(functionals), space_from_json(j.at("seq_space")));
  }
  if (kind == "inverse-of") {
    check_fields(j, "inverse-of map", {"kind", "children", "params"});
    if (!j.at("children").is_array() || j.at("children").size() != 2) {
      parse_fail("inverse-of map: \"children\" must hold the target and the reference map");
    }
    MapHandle target = map_from_json(j.at("children").front());
    MapHandle reference = map_from_json(j.at("children").back());
    const json& params = j.at("params");
    check_fields(params, "inverse-of params",
                 {"lambda1", "lambda2", "target_residual", "max_iterations", "restarts",
                  "fd_step", "seed"});
    SolverConfig cfg;
    cfg.target = get_double(params, "target_residual", "map");
    cfg.max_iters = get_int(params, "max_iterations", "map");
    cfg.restarts = get_int(params, "restarts", "map");
    cfg.fd_step = get_double(params, "fd_step", "map");
    cfg.seed = params.at("seed").get<std::uint64_t>();
    PerturbationProfile profile = profile_from_constants(
        get_double(params, "lambda1", "map"), get_double(params, "lambda2", "map"), 0.0);
    return certified_inverse_map(target, reference, profile, cfg);
  }
  parse_fail("map: unknown kind \"" + kind + "\"");
}

json lip_estimate_to_json(const LipEstimate& est) {
  return json{{"lower", est.lower},
              {"bilip_lower", est.bilip_lower},
              {"pair_count", est.pair_count},
              {"sample_seed", est.sample_seed}};
}

json profile_to_json(const PerturbationProfile& profile) {
  json vertices = json::array();
  for (const auto& v : profile.frontier.vertices) {
    vertices.push_back(json::array({v.lambda1, v.lambda2}));
  }
  return json{{"lambda1", profile.lambda1},
              {"lambda2", profile.lambda2},
              {"mu", profile.mu},
              {"lambda2_is_one", profile.lambda2_is_one},
              {"globally_certified", profile.globally_certified},
              {"frontier", std::move(vertices)},
              {"sample_seed", profile.sample_seed}};
}

json bound_report_to_json(const BoundReport& report) {
  return json{{"formula_id", report.formula_id},
              {"lambda1", report.lambda1},
              {"lambda2", report.lambda2},
              {"lip_S", report.lip_S},
              {"lip_S_inv", report.lip_S_inv},
              {"epsilon", report.epsilon},
              {"lip_TS_inv", report.lip_TS_inv},
              {"lip_T_lower", report.lip_T_lower},
              {"lip_T_upper", report.lip_T_upper},
              {"lip_Tinv_lower", report.lip_Tinv_lower},
              {"lip_Tinv_upper", report.lip_Tinv_upper},
              {"invertibility_threshold", report.invertibility_threshold}};
}

json certificate_to_json(const InversionCertificate& cert) {
  return json{{"solution", cert.solution.coords},
              {"residual", cert.residual},
              {"error_radius", cert.error_radius},
              {"iterations", cert.iterations},
              {"contraction_mode", contraction_mode_name(cert.contraction_mode)},
              {"q", cert.q},
              {"lip_S_inv", cert.lip_S_inv},
              {"lip_S_inv_exact", cert.lip_S_inv_exact},
              {"residual_history", cert.residual_history}};
}

json scan_report_to_json(const ScanReport& report) {
  json entries = json::array();
  for (const auto& entry : report.entries) {
    entries.push_back(json{{"alpha", entry.alpha},
                           {"sample_lower", entry.sample_lower},
                           {"within_guarantee", entry.within_guarantee},
                           {"has_exact", entry.has_exact},
                           {"exact_invertible", entry.exact_invertible},
                           {"sigma_min", entry.sigma_min},
                           {"violation", entry.violation}});
  }
  return json{{"threshold", report.threshold},
              {"any_violation", report.any_violation},
              {"entries", std::move(entries)}};
}

json frame_to_json(const MetricFrame& frame) {
  json functionals = json::array();
  for (const auto& f : frame.functionals) functionals.push_back(map_to_json(f));
  return json{{"functionals", std::move(functionals)},
              {"seq_space", space_to_json(frame.seq_space)},
              {"synthesis", map_to_json(frame.synthesis)},
              {"claimed_bounds",
               json::array({frame.claimed_bounds.first, frame.claimed_bounds.second})}};
}

MetricFrame frame_from_json(const json& j) {
  check_fields(j, "frame", {"functionals", "seq_space", "synthesis", "claimed_bounds"});
  if (!j.at("functionals").is_array() || j.at("functionals").empty()) {
    parse_fail("frame: \"functionals\" must be a nonempty array");
  }
  std::vector<MapHandle> functionals;
  for (const auto& entry : j.at("functionals")) functionals.push_back(map_from_json(entry));
  auto bounds = get_number_array(j.at("claimed_bounds"), "frame: claimed_bounds");
  if (bounds.size() != 2) parse_fail("frame: \"claimed_bounds\" must be [a, b]");
  return make_frame(std::move(functionals), space_from_json(j.at("seq_space")),
                    map_from_json(j.at("synthesis")), {bounds[0], bounds[1]});
}

json frame_estimate_to_json(const FrameBoundEstimate& est) {
  return json{{"a_emp", est.a_emp},
              {"b_emp", est.b_emp},
              {"reconstruction_max_error", est.reconstruction_max_error}};
}

json decomposition_to_json(const AtomicDecomposition& dec) {
  json functionals = json::array();
  for (const auto& f : dec.functionals) functionals.push_back(map_to_json(f));
  json atoms = json::array();
  for (const auto& atom : dec.atoms) atoms.push_back(atom.coords);
  return json{{"functionals", std::move(functionals)},
              {"space", space_to_json(decomposition_space(dec))},
              {"atoms", std::move(atoms)},
              {"seq_space", space_to_json(dec.seq_space)},
              {"claimed_bounds",
               json::array({dec.claimed_bounds.first, dec.claimed_bounds.second})}};
}

AtomicDecomposition decomposition_from_json(const json& j) {
  check_fields(j, "decomposition",
               {"functionals", "space", "atoms", "seq_space", "claimed_bounds"});
  if (!j.at("functionals").is_array() || j.at("functionals").empty()) {
    parse_fail("decomposition: \"functionals\" must be a nonempty array");
  }
  std::vector<MapHandle> functionals;
  for (const auto& entry : j.at("functionals")) functionals.push_back(map_from_json(entry));
  NormedSpace base = space_from_json(j.at("space"));
  if (!j.at("atoms").is_array()) parse_fail("decomposition: \"atoms\" must be an array");
  std::vector<Vector> atoms;
  for (const auto& entry : j.at("atoms")) {
    atoms.push_back(make_vector(base, get_number_array(entry, "decomposition: atom")));
  }
  auto bounds = get_number_array(j.at("claimed_bounds"), "decomposition: claimed_bounds");
  if (bounds.size() != 2) parse_fail("decomposition: \"claimed_bounds\" must be [a, b]");
  return make_decomposition(std::move(functionals), std::move(atoms),
                            space_from_json(j.at("seq_space")), {bounds[0], bounds[1]});
}

json validation_report_to_json(const ValidationReport& report) {
  return json{{"a_emp", report.a_emp},
              {"b_emp", report.b_emp},
              {"max_coeff_norm", report.max_coeff_norm},
              {"max_reconstruction_error", report.max_reconstruction_error},
              {"bounds_ok", report.bounds_ok},
              {"reconstruction_ok", report.reconstruction_ok},
              {"pass", report.pass}};
}

json schauder_report_to_json(const SchauderReport& report) {
  return json{{"pass", report.pass},
              {"basis_constant_estimate", report.basis_constant_estimate},
              {"all_nonzero", report.all_nonzero},
              {"spans", report.spans},
              {"rank", report.rank},
              {"reason", report.reason}};
}

json dilation_to_json(const DilationResult& result) {
  json basis = json::array();
  for (const auto& v : result.basis) basis.push_back(v.coords);
  return json{{"Z", space_to_json(result.Z)},
              {"theta", map_to_json(result.theta)},
              {"gamma", map_to_json(result.gamma)},
              {"P", map_to_json(result.P)},
              {"basis", std::move(basis)},
              {"zero_atom_indices", result.zero_atom_indices},
              {"normalized_indices", result.normalized_indices},
              {"normalized", decomposition_to_json(result.normalized)}};
}

}  // namespace lipkit
