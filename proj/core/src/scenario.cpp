#include "lipkit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lipkit/error.hpp"

namespace lipkit {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorKind::parse, msg); }

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

std::string kv(const std::string& key, const std::string& value) {
  std::string line = "  " + key;
  if (line.size() < 30) line.append(30 - line.size(), ' ');
  return line + value + "\n";
}

// ---------------------------------------------------------------------------
// Named-reference resolution. Spaces, maps, frames, and decompositions may be
// given inline or as strings naming entries of the corresponding section.

struct Sections {
  const json* spaces = nullptr;
  const json* maps = nullptr;
  const json* frames = nullptr;
  const json* decompositions = nullptr;
  mutable std::set<std::string> active_maps;  // cycle guard
};

const json& named_entry(const json* section, const char* section_name, const std::string& name) {
  if (section == nullptr || !section->is_object() || !section->contains(name)) {
    parse_fail(std::string(section_name) + ": no entry named \"" + name + "\"");
  }
  return section->at(name);
}

json resolve_space_json(const json& j, const Sections& s) {
  if (j.is_string()) {
    return resolve_space_json(named_entry(s.spaces, "spaces", j.get<std::string>()), s);
  }
  if (!j.is_object()) return j;
  json out = j;
  if (out.contains("base")) out["base"] = resolve_space_json(out["base"], s);
  if (out.contains("parts") && out["parts"].is_array()) {
    for (auto& part : out["parts"]) part = resolve_space_json(part, s);
  }
  return out;
}

json resolve_map_json(const json& j, const Sections& s) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (s.active_maps.count(name)) {
      parse_fail("maps: reference cycle through \"" + name + "\"");
    }
    s.active_maps.insert(name);
    json out = resolve_map_json(named_entry(s.maps, "maps", name), s);
    s.active_maps.erase(name);
    return out;
  }
  if (!j.is_object()) return j;
  json out = j;
  for (const char* field : {"domain", "codomain", "seq_space"}) {
    if (out.contains(field)) out[field] = resolve_space_json(out[field], s);
  }
  if (out.contains("children") && out["children"].is_array()) {
    for (auto& child : out["children"]) child = resolve_map_json(child, s);
  }
  return out;
}

json resolve_frame_json(const json& j, const Sections& s) {
  if (j.is_string()) {
    return resolve_frame_json(named_entry(s.frames, "frames", j.get<std::string>()), s);
  }
  if (!j.is_object()) return j;
  json out = j;
  if (out.contains("functionals") && out["functionals"].is_array()) {
    for (auto& f : out["functionals"]) f = resolve_map_json(f, s);
  }
  if (out.contains("synthesis")) out["synthesis"] = resolve_map_json(out["synthesis"], s);
  if (out.contains("seq_space")) out["seq_space"] = resolve_space_json(out["seq_space"], s);
  return out;
}

json resolve_decomposition_json(const json& j, const Sections& s) {
  if (j.is_string()) {
    return resolve_decomposition_json(
        named_entry(s.decompositions, "decompositions", j.get<std::string>()), s);
  }
  if (!j.is_object()) return j;
  json out = j;
  if (out.contains("functionals") && out["functionals"].is_array()) {
    for (auto& f : out["functionals"]) f = resolve_map_json(f, s);
  }
  for (const char* field : {"space", "seq_space"}) {
    if (out.contains(field)) out[field] = resolve_space_json(out[field], s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Typed parameter extraction.

const json& required(const json& params, const char* field, const char* task) {
  if (!params.contains(field)) {
    parse_fail(std::string(task) + ": missing required parameter \"" + field + "\"");
  }
  return params.at(field);
}

double number_param(const json& params, const char* field, const char* task) {
  const json& j = required(params, field, task);
  if (!j.is_number()) parse_fail(std::string(task) + ": \"" + field + "\" must be a number");
  return j.get<double>();
}

MapHandle map_param(const json& params, const char* field, const char* task, const Sections& s) {
  return map_from_json(resolve_map_json(required(params, field, task), s));
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a nonempty array");
  std::vector<double> out;
  for (const auto& entry : j) {
    if (!entry.is_number()) parse_fail(std::string(what) + " must contain only numbers");
    out.push_back(entry.get<double>());
  }
  return out;
}

SamplerConfig sampler_param(const json& params, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  if (!params.contains("sampler")) return cfg;
  const json& j = params.at("sampler");
  check_fields(j, "sampler", {}, {"count", "box_radius", "scheme", "pair_budget"});
  if (j.contains("count")) {
    cfg.count = j.at("count").get<int>();
    if (cfg.count < 1) parse_fail("sampler: \"count\" must be positive");
  }
  if (j.contains("box_radius")) cfg.box_radius = j.at("box_radius").get<double>();
  if (j.contains("pair_budget")) cfg.pair_budget = j.at("pair_budget").get<std::size_t>();
  if (j.contains("scheme")) {
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "uniform-box") {
      cfg.scheme = SampleScheme::uniform_box;
    } else if (scheme == "gaussian") {
      cfg.scheme = SampleScheme::gaussian;
    } else if (scheme == "grid") {
      cfg.scheme = SampleScheme::grid;
    } else {
      parse_fail("sampler: unknown scheme \"" + scheme + "\"");
    }
  }
  return cfg;
}

SolverConfig solver_param(const json& params, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  if (!params.contains("solver")) return cfg;
  const json& j = params.at("solver");
  check_fields(j, "solver", {}, {"target", "max_iters", "restarts", "fd_step"});
  if (j.contains("target")) cfg.target = j.at("target").get<double>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
  if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
  if (j.contains("fd_step")) cfg.fd_step = j.at("fd_step").get<double>();
  return cfg;
}

ObjectiveSpec objective_param(const json& j) {
  check_fields(j, "objective", {"kind"}, {"w1", "w2", "frame_bound_b"});
  ObjectiveSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "inv-factor") {
    spec.kind = ObjectiveKind::inv_factor;
  } else if (kind == "fwd-factor") {
    spec.kind = ObjectiveKind::fwd_factor;
  } else if (kind == "sum") {
    spec.kind = ObjectiveKind::sum;
  } else if (kind == "weighted") {
    spec.kind = ObjectiveKind::weighted;
  } else if (kind == "stability-ratio") {
    spec.kind = ObjectiveKind::stability_ratio;
  } else {
    parse_fail("objective: unknown kind \"" + kind + "\"");
  }
  if (j.contains("w1")) spec.w1 = j.at("w1").get<double>();
  if (j.contains("w2")) spec.w2 = j.at("w2").get<double>();
  if (j.contains("frame_bound_b")) spec.frame_bound_b = j.at("frame_bound_b").get<double>();
  return spec;
}

// Either fixed constants {lambda1, lambda2, mu?} or {"estimate": {sampler?,
// objective?, mu_grid?}} run against the supplied S/T pair.
PerturbationProfile profile_param(const json& params, const char* task, const MapHandle& S,
                                  const MapHandle& T, std::uint64_t seed) {
  const json& j = required(params, "profile", task);
  if (j.is_object() && j.contains("estimate")) {
    check_fields(j, "profile", {"estimate"});
    const json& e = j.at("estimate");
    check_fields(e, "profile estimate", {}, {"sampler", "objective", "mu_grid"});
    SamplerConfig sampler = sampler_param(e, seed);
    ProfileConfig cfg;
    if (e.contains("objective")) cfg.objective = objective_param(e.at("objective"));
    if (e.contains("mu_grid")) {
      return estimate_profile_mu(S, T, sampler, number_list(e.at("mu_grid"), "profile mu_grid"),
                                 cfg);
    }
    return estimate_profile(S, T, sampler, cfg);
  }
  check_fields(j, "profile", {"lambda1", "lambda2"}, {"mu"});
  double mu = j.contains("mu") ? j.at("mu").get<double>() : 0.0;
  return profile_from_constants(j.at("lambda1").get<double>(), j.at("lambda2").get<double>(),
                                mu);
}

std::vector<double> grid_param(const json& j, const char* what) {
  if (j.is_array()) return number_list(j, what);
  check_fields(j, what, {"from", "to", "count"});
  const double from = j.at("from").get<double>();
  const double to = j.at("to").get<double>();
  const int count = j.at("count").get<int>();
  if (count < 1) parse_fail(std::string(what) + ": \"count\" must be positive");
  std::vector<double> grid;
  if (count == 1) {
    grid.push_back(from);
    return grid;
  }
  for (int i = 0; i < count; ++i) {
    grid.push_back(from + (to - from) * static_cast<double>(i) / (count - 1));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Task handlers. Each produces the "result" subtree of the machine block and
// human lines; `ok` reports handler-level failures that still yield a block.

struct TaskOutcome {
  json result;
  bool ok = true;
};

TaskOutcome task_estimate_lip(const json& params, const Sections& s, std::uint64_t seed,
                              std::vector<std::string>& lines) {
  check_fields(params, "estimate-lip params", {"map"}, {"sampler"});
  MapHandle m = map_param(params, "map", "estimate-lip", s);
  LipEstimate est = lip_estimate(m, sampler_param(params, seed));
  TaskOutcome out;
  out.result["map_kind"] = map_kind_name(m.kind());
  out.result["estimate"] = lip_estimate_to_json(est);
  lines.push_back(kv("sampled Lip lower bound", fmt(est.lower)));
  lines.push_back(kv("sampled bi-Lip floor", fmt(est.bilip_lower)));
  if (lip_exact_supported(m)) {
    const double exact = lip_exact_affine(m);
    out.result["exact"] = exact;
    lines.push_back(kv("exact operator norm", fmt(exact)));
  } else {
    out.result["exact"] = nullptr;
    lines.push_back(kv("exact operator norm", "unavailable for this map"));
  }
  return out;
}

TaskOutcome task_estimate_profile(const json& params, const Sections& s, std::uint64_t seed,
                                  std::vector<std::string>& lines) {
  check_fields(params, "estimate-profile params", {"S", "T"},
               {"sampler", "objective", "mu_grid"});
  MapHandle S = map_param(params, "S", "estimate-profile", s);
  MapHandle T = map_param(params, "T", "estimate-profile", s);
  SamplerConfig sampler = sampler_param(params, seed);
  ProfileConfig cfg;
  if (params.contains("objective")) cfg.objective = objective_param(params.at("objective"));
  PerturbationProfile profile =
      params.contains("mu_grid")
          ? estimate_profile_mu(S, T, sampler,
                                number_list(params.at("mu_grid"), "estimate-profile mu_grid"),
                                cfg)
          : estimate_profile(S, T, sampler, cfg);
  TaskOutcome out;
  out.result["profile"] = profile_to_json(profile);
  lines.push_back(kv("lambda1", fmt(profile.lambda1)));
  lines.push_back(kv("lambda2", fmt(profile.lambda2)));
  lines.push_back(kv("mu", fmt(profile.mu)));
  lines.push_back(kv("globally certified", profile.globally_certified ? "yes" : "no"));
  lines.push_back(kv("frontier vertices", std::to_string(profile.frontier.vertices.size())));
  if (profile.lambda1 < 1.0 && profile.lambda2 < 1.0) {
    lines.push_back(
        kv("contraction rate q", fmt(q_contraction_rate(profile.lambda1, profile.lambda2))));
  }
  return out;
}

void bound_report_lines(const BoundReport& report, std::vector<std::string>& lines) {
  lines.push_back(kv("Lip(T) interval",
                     "[" + fmt(report.lip_T_lower) + ", " + fmt(report.lip_T_upper) + "]"));
  lines.push_back(kv("Lip(T^-1) interval",
                     "[" + fmt(report.lip_Tinv_lower) + ", " + fmt(report.lip_Tinv_upper) + "]"));
  lines.push_back(kv("alpha threshold", fmt(report.invertibility_threshold)));
}

TaskOutcome task_bounds(const json& params, std::uint64_t seed, std::vector<std::string>& lines) {
  (void)seed;
  const std::string formula = required(params, "formula", "bounds").get<std::string>();
  TaskOutcome out;
  out.result["formula"] = formula;
  if (formula == "main") {
    check_fields(params, "bounds params",
                 {"formula", "lambda1", "lambda2", "lip_S", "lip_S_inv"});
    BoundReport report = bounds_main(
        number_param(params, "lambda1", "bounds"), number_param(params, "lambda2", "bounds"),
        number_param(params, "lip_S", "bounds"), number_param(params, "lip_S_inv", "bounds"));
    out.result["report"] = bound_report_to_json(report);
    bound_report_lines(report, lines);
  } else if (formula == "hilding") {
    check_fields(params, "bounds params", {"formula", "lambda"});
    BoundReport report = bounds_hilding(number_param(params, "lambda", "bounds"));
    out.result["report"] = bound_report_to_json(report);
    bound_report_lines(report, lines);
  } else if (formula == "guo") {
    check_fields(params, "bounds params",
                 {"formula", "lambda1", "lambda2", "epsilon", "lip_TS_inv"},
                 {"lip_S", "lip_S_inv"});
    BoundReport report = bounds_guo(
        number_param(params, "lambda1", "bounds"), number_param(params, "lambda2", "bounds"),
        number_param(params, "epsilon", "bounds"), number_param(params, "lip_TS_inv", "bounds"),
        params.contains("lip_S") ? params.at("lip_S").get<double>() : 1.0,
        params.contains("lip_S_inv") ? params.at("lip_S_inv").get<double>() : 1.0);
    out.result["report"] = bound_report_to_json(report);
    bound_report_lines(report, lines);
  } else if (formula == "guo-sweep") {
    check_fields(params, "bounds params",
                 {"formula", "lambda1", "lambda2", "lip_TS_inv", "eps_grid"},
                 {"lip_S", "lip_S_inv"});
    GuoSweepResult sweep = guo_sweep(
        number_param(params, "lambda1", "bounds"), number_param(params, "lambda2", "bounds"),
        number_param(params, "lip_TS_inv", "bounds"),
        number_list(params.at("eps_grid"), "bounds eps_grid"),
        params.contains("lip_S") ? params.at("lip_S").get<double>() : 1.0,
        params.contains("lip_S_inv") ? params.at("lip_S_inv").get<double>() : 1.0);
    out.result["epsilon"] = sweep.epsilon;
    out.result["report"] = bound_report_to_json(sweep.report);
    lines.push_back(kv("selected epsilon", fmt(sweep.epsilon)));
    bound_report_lines(sweep.report, lines);
  } else if (formula == "p-combined") {
    check_fields(params, "bounds params", {"formula", "lambda1", "lambda2", "p"});
    auto [l1, l2] = reduce_p_combined(number_param(params, "lambda1", "bounds"),
                                      number_param(params, "lambda2", "bounds"),
                                      number_param(params, "p", "bounds"));
    out.result["lambda1_reduced"] = l1;
    out.result["lambda2_reduced"] = l2;
    lines.push_back(kv("reduced lambda1", fmt(l1)));
    lines.push_back(kv("reduced lambda2", fmt(l2)));
  } else if (formula == "lambda2-one") {
    check_fields(params, "bounds params", {"formula", "lambda", "lip_S_inv"});
    const double v = bounds_lambda2_one(number_param(params, "lambda", "bounds"),
                                        number_param(params, "lip_S_inv", "bounds"));
    out.result["lip_Tinv_upper"] = v;
    lines.push_back(kv("Lip(T^-1) upper bound", fmt(v)));
  } else if (formula == "soderlind") {
    check_fields(params, "bounds params", {"formula", "alpha", "beta"});
    const double v = bounds_soderlind(number_param(params, "alpha", "bounds"),
                                      number_param(params, "beta", "bounds"));
    out.result["lip_Ainv_upper"] = v;
    lines.push_back(kv("Lip(A^-1) upper bound", fmt(v)));
  } else if (formula == "barbagallo") {
    check_fields(params, "bounds params", {"formula", "alpha", "beta", "hilbert"});
    if (!params.at("hilbert").is_boolean()) {
      parse_fail("bounds: \"hilbert\" must be a boolean");
    }
    const double v = bounds_barbagallo(number_param(params, "alpha", "bounds"),
                                       number_param(params, "beta", "bounds"),
                                       params.at("hilbert").get<bool>());
    out.result["lip_Ainv_upper"] = v;
    lines.push_back(kv("Lip(A^-1) upper bound", fmt(v)));
  } else if (formula == "q-rate") {
    check_fields(params, "bounds params", {"formula", "lambda1", "lambda2"});
    const double q = q_contraction_rate(number_param(params, "lambda1", "bounds"),
                                        number_param(params, "lambda2", "bounds"));
    out.result["q"] = q;
    lines.push_back(kv("contraction rate q", fmt(q)));
  } else {
    parse_fail("bounds: unknown formula \"" + formula + "\"");
  }
  return out;
}

TaskOutcome task_invert(const json& params, const Sections& s, std::uint64_t seed,
                        std::vector<std::string>& lines) {
  check_fields(params, "invert params", {"T", "S", "y", "profile"}, {"solver"});
  MapHandle T = map_param(params, "T", "invert", s);
  MapHandle S = map_param(params, "S", "invert", s);
  Vector y = make_vector(T.codomain(), number_list(params.at("y"), "invert y"));
  PerturbationProfile profile = profile_param(params, "invert", S, T, seed);
  SolverConfig solver = solver_param(params, seed);
  TaskOutcome out;
  try {
    InversionCertificate cert = invert_certified(T, y, S, profile, solver);
    out.result["certificate"] = certificate_to_json(cert);
    lines.push_back(kv("mode", contraction_mode_name(cert.contraction_mode)));
    lines.push_back(kv("iterations", std::to_string(cert.iterations)));
    lines.push_back(kv("residual", fmt(cert.residual)));
    lines.push_back(kv("certified error radius", fmt(cert.error_radius)));
  } catch (const SolverFailure& e) {
    out.ok = false;
    out.result["certificate"] = certificate_to_json(e.best());
    out.result["failure"] = e.what();
    lines.push_back(kv("solver failure", e.what()));
    lines.push_back(kv("best residual", fmt(e.best().residual)));
  }
  return out;
}

TaskOutcome task_resolvent_scan(const json& params, const Sections& s, std::uint64_t seed,
                                std::vector<std::string>& lines) {
  check_fields(params, "resolvent-scan params", {"S", "T", "profile", "alpha_grid"},
               {"sampler"});
  MapHandle S = map_param(params, "S", "resolvent-scan", s);
  MapHandle T = map_param(params, "T", "resolvent-scan", s);
  PerturbationProfile profile = profile_param(params, "resolvent-scan", S, T, seed);
  ScanReport scan = resolvent_scan(S, T, profile,
                                   grid_param(params.at("alpha_grid"), "alpha_grid"),
                                   sampler_param(params, seed));
  std::size_t guaranteed = 0;
  std::size_t violations = 0;
  for (const auto& entry : scan.entries) {
    guaranteed += entry.within_guarantee ? 1 : 0;
    violations += entry.violation ? 1 : 0;
  }
  TaskOutcome out;
  out.result["scan"] = scan_report_to_json(scan);
  lines.push_back(kv("alpha threshold", fmt(scan.threshold)));
  lines.push_back(kv("grid points", std::to_string(scan.entries.size())));
  lines.push_back(kv("inside guarantee", std::to_string(guaranteed)));
  lines.push_back(kv("violations", std::to_string(violations)));
  out.ok = !scan.any_violation;
  return out;
}

TaskOutcome task_frame_perturb(const json& params, const Sections& s, std::uint64_t seed,
                               std::vector<std::string>& lines) {
  check_fields(params, "frame-perturb params", {"frame", "T", "profile"},
               {"sampler", "solver"});
  MetricFrame frame = frame_from_json(resolve_frame_json(required(params, "frame", "frame-perturb"), s));
  MapHandle T = map_param(params, "T", "frame-perturb", s);
  PerturbationProfile profile = profile_param(params, "frame-perturb", frame.synthesis, T, seed);
  SamplerConfig sampler = sampler_param(params, seed);
  MetricFrame out_frame = perturb_frame(frame, T, profile, sampler, solver_param(params, seed));

  SamplerConfig validation = sampler;
  validation.seed = seed + 1;
  FrameBoundEstimate est = frame_bounds_estimate(out_frame, validation);
  const bool within = est.a_emp >= out_frame.claimed_bounds.first - 1e-9 &&
                      est.b_emp <= out_frame.claimed_bounds.second + 1e-9;

  TaskOutcome out;
  out.result["profile"] = profile_to_json(profile);
  out.result["claimed"] =
      json::array({out_frame.claimed_bounds.first, out_frame.claimed_bounds.second});
  out.result["estimate"] = frame_estimate_to_json(est);
  out.result["bounds_within_claimed"] = within;
  out.result["frame"] = frame_to_json(out_frame);
  lines.push_back(kv("claimed bounds", "[" + fmt(out_frame.claimed_bounds.first) + ", " +
                                           fmt(out_frame.claimed_bounds.second) + "]"));
  lines.push_back(kv("empirical bounds", "[" + fmt(est.a_emp) + ", " + fmt(est.b_emp) + "]"));
  lines.push_back(kv("reconstruction error", fmt(est.reconstruction_max_error)));
  lines.push_back(kv("bounds within claimed", within ? "yes" : "no"));
  out.ok = within;
  return out;
}

TaskOutcome task_atomic_perturb(const json& params, const Sections& s, std::uint64_t seed,
                                std::vector<std::string>& lines) {
  check_fields(params, "atomic-perturb params", {"decomposition", "new_atoms", "profile"},
               {"sampler", "solver", "check_tolerance"});
  AtomicDecomposition dec = decomposition_from_json(
      resolve_decomposition_json(required(params, "decomposition", "atomic-perturb"), s));
  const NormedSpace& base = decomposition_space(dec);
  const json& atoms_json = required(params, "new_atoms", "atomic-perturb");
  if (!atoms_json.is_array()) parse_fail("atomic-perturb: \"new_atoms\" must be an array");
  std::vector<Vector> new_atoms;
  for (const auto& entry : atoms_json) {
    new_atoms.push_back(make_vector(base, number_list(entry, "atomic-perturb new atom")));
  }
  MapHandle synth_old = synthesis_from_atoms(dec.seq_space, dec.atoms);
  MapHandle synth_new = synthesis_from_atoms(dec.seq_space, new_atoms);
  PerturbationProfile profile =
      profile_param(params, "atomic-perturb", synth_old, synth_new, seed);
  SamplerConfig sampler = sampler_param(params, seed);
  AtomicDecomposition out_dec =
      perturb_decomposition(dec, new_atoms, profile, sampler, solver_param(params, seed));

  SamplerConfig validation = sampler;
  validation.seed = seed + 1;
  const double tolerance =
      params.contains("check_tolerance") ? params.at("check_tolerance").get<double>() : 1e-7;
  ValidationReport report = check_decomposition(out_dec, validation, tolerance);

  TaskOutcome out;
  out.result["profile"] = profile_to_json(profile);
  out.result["claimed"] =
      json::array({out_dec.claimed_bounds.first, out_dec.claimed_bounds.second});
  out.result["validation"] = validation_report_to_json(report);
  out.result["decomposition"] = decomposition_to_json(out_dec);
  lines.push_back(kv("claimed bounds", "[" + fmt(out_dec.claimed_bounds.first) + ", " +
                                           fmt(out_dec.claimed_bounds.second) + "]"));
  lines.push_back(kv("empirical bounds", "[" + fmt(report.a_emp) + ", " + fmt(report.b_emp) + "]"));
  lines.push_back(kv("reconstruction error", fmt(report.max_reconstruction_error)));
  lines.push_back(kv("validation pass", report.pass ? "yes" : "no"));
  out.ok = report.pass;
  return out;
}

TaskOutcome task_dilate(const json& params, const Sections& s, std::uint64_t seed,
                        std::vector<std::string>& lines) {
  check_fields(params, "dilate params", {"decomposition"}, {"verify_samples", "verify_tol"});
  AtomicDecomposition dec = decomposition_from_json(
      resolve_decomposition_json(required(params, "decomposition", "dilate"), s));
  const int samples =
      params.contains("verify_samples") ? params.at("verify_samples").get<int>() : 128;
  const double tol =
      params.contains("verify_tol") ? params.at("verify_tol").get<double>() : 1e-10;
  DilationResult res = dilate(dec, samples, seed, tol);
  TaskOutcome out;
  out.result["dilation"] = dilation_to_json(res);
  lines.push_back(kv("case", res.zero_atom_indices.empty() ? "all atoms nonzero"
                                                           : "zero atoms split off"));
  lines.push_back(kv("Z dimension", std::to_string(res.Z.dim)));
  lines.push_back(kv("zero atoms", std::to_string(res.zero_atom_indices.size())));
  lines.push_back(kv("functionals zeroed", std::to_string(res.normalized_indices.size())));
  return out;
}

TaskOutcome task_schauder_check(const json& params, const Sections& s, std::uint64_t seed,
                                std::vector<std::string>& lines) {
  check_fields(params, "schauder-check params", {"space", "atoms"},
               {"pivot_rel_tol", "sample_count"});
  NormedSpace space =
      space_from_json(resolve_space_json(required(params, "space", "schauder-check"), s));
  const json& atoms_json = required(params, "atoms", "schauder-check");
  if (!atoms_json.is_array() || atoms_json.empty()) {
    parse_fail("schauder-check: \"atoms\" must be a nonempty array");
  }
  std::vector<Vector> atoms;
  for (const auto& entry : atoms_json) {
    atoms.push_back(make_vector(space, number_list(entry, "schauder-check atom")));
  }
  const double pivot =
      params.contains("pivot_rel_tol") ? params.at("pivot_rel_tol").get<double>() : 1e-10;
  const int count =
      params.contains("sample_count") ? params.at("sample_count").get<int>() : 200;
  SchauderReport report = schauder_check(atoms, pivot, count, seed);
  TaskOutcome out;
  out.result["report"] = schauder_report_to_json(report);
  lines.push_back(kv("pass", report.pass ? "yes" : "no"));
  lines.push_back(kv("basis constant (sampled)", fmt(report.basis_constant_estimate)));
  lines.push_back(kv("rank", std::to_string(report.rank)));
  if (!report.reason.empty()) lines.push_back(kv("reason", report.reason));
  out.ok = report.pass;
  return out;
}

// ---------------------------------------------------------------------------
// Expectations: {"path.into.machine.block": spec} where spec is a plain value
// (tolerant equality for numbers, exact otherwise) or {"max"|"min"|"equals"}.

const json* path_lookup(const json& root, const std::string& path) {
  const json* current = &root;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string segment =
        path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (segment.empty()) return nullptr;
    if (current->is_object()) {
      auto it = current->find(segment);
      if (it == current->end()) return nullptr;
      current = &*it;
    } else if (current->is_array()) {
      char* end = nullptr;
      const long index = std::strtol(segment.c_str(), &end, 10);
      if (end == nullptr || *end != '\0' || index < 0 ||
          index >= static_cast<long>(current->size())) {
        return nullptr;
      }
      current = &(*current)[static_cast<std::size_t>(index)];
    } else {
      return nullptr;
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return current;
}

bool numbers_close(double actual, double expected, double tolerance) {
  return std::abs(actual - expected) <= tolerance * std::max(1.0, std::abs(expected));
}

json run_expectations(const json& expect, const json& machine, double tolerance, bool& all_ok,
                      std::vector<std::string>& lines) {
  json entries = json::array();
  for (const auto& [path, spec] : expect.items()) {
    std::string mode = "equals";
    const json* target = &spec;
    if (spec.is_object()) {
      check_fields(spec, "expectation", {}, {"max", "min", "equals"});
      if (spec.size() != 1) {
        parse_fail("expectation \"" + path + "\" must hold exactly one of max/min/equals");
      }
      const auto& item = spec.items().begin();
      mode = item.key();
      target = &item.value();
    }
    const json* actual = path_lookup(machine, path);
    bool ok = false;
    if (actual != nullptr) {
      if (mode == "equals") {
        if (actual->is_number() && target->is_number()) {
          ok = numbers_close(actual->get<double>(), target->get<double>(), tolerance);
        } else {
          ok = (*actual == *target);
        }
      } else if (!actual->is_number() || !target->is_number()) {
        parse_fail("expectation \"" + path + "\": max/min need numeric values");
      } else if (mode == "max") {
        ok = actual->get<double>() <= target->get<double>();
      } else {
        ok = actual->get<double>() >= target->get<double>();
      }
    }
    json entry;
    entry["path"] = path;
    entry["mode"] = mode;
    entry["expected"] = *target;
    entry["actual"] = actual == nullptr ? json() : *actual;
    entry["ok"] = ok;
    entries.push_back(std::move(entry));
    all_ok = all_ok && ok;
    lines.push_back("  " + std::string(ok ? "PASS  " : "FAIL  ") + path + " " + mode + " " +
                    target->dump() + (ok ? "" : "  (actual " + entry["actual"].dump() + ")") +
                    "\n");
  }
  return entries;
}

}  // namespace

RunReport run_scenario_json(const json& document, const RunOptions& options) {
  check_fields(document, "scenario", {"schema", "name", "seed", "task"},
               {"params", "spaces", "maps", "frames", "decompositions", "expect", "tolerance",
                "theorem", "notes"});
  if (!document.at("schema").is_string() ||
      document.at("schema").get<std::string>() != kScenarioSchema) {
    parse_fail(std::string("scenario: \"schema\" must be \"") + kScenarioSchema + "\"");
  }
  if (!document.at("name").is_string()) parse_fail("scenario: \"name\" must be a string");
  const std::string name = document.at("name").get<std::string>();
  if (!document.at("seed").is_number_integer() ||
      (document.at("seed").is_number_integer() && document.at("seed").get<long long>() < 0)) {
    parse_fail("scenario: \"seed\" must be a nonnegative integer");
  }
  std::uint64_t seed = document.at("seed").get<std::uint64_t>();
  if (options.seed_override) seed = *options.seed_override;
  double tolerance = 1e-9;
  if (document.contains("tolerance")) {
    tolerance = document.at("tolerance").get<double>();
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      parse_fail("scenario: \"tolerance\" must be positive and finite");
    }
  }
  if (options.tolerance_override) tolerance = *options.tolerance_override;
  const std::string task = document.at("task").get<std::string>();
  const json params = document.contains("params") ? document.at("params") : json::object();

  if (task == "demo") {
    check_fields(params, "demo params", {"name"});
    return run_scenario_json(demo_scenario(params.at("name").get<std::string>()), options);
  }

  Sections sections;
  if (document.contains("spaces")) sections.spaces = &document.at("spaces");
  if (document.contains("maps")) sections.maps = &document.at("maps");
  if (document.contains("frames")) sections.frames = &document.at("frames");
  if (document.contains("decompositions")) {
    sections.decompositions = &document.at("decompositions");
  }

  std::vector<std::string> lines;
  TaskOutcome outcome;
  if (task == "estimate-lip") {
    outcome = task_estimate_lip(params, sections, seed, lines);
  } else if (task == "estimate-profile") {
    outcome = task_estimate_profile(params, sections, seed, lines);
  } else if (task == "bounds") {
    outcome = task_bounds(params, seed, lines);
  } else if (task == "invert") {
    outcome = task_invert(params, sections, seed, lines);
  } else if (task == "resolvent-scan") {
    outcome = task_resolvent_scan(params, sections, seed, lines);
  } else if (task == "frame-perturb") {
    outcome = task_frame_perturb(params, sections, seed, lines);
  } else if (task == "atomic-perturb") {
    outcome = task_atomic_perturb(params, sections, seed, lines);
  } else if (task == "dilate") {
    outcome = task_dilate(params, sections, seed, lines);
  } else if (task == "schauder-check") {
    outcome = task_schauder_check(params, sections, seed, lines);
  } else {
    parse_fail("scenario: unknown task \"" + task +
               "\" (expected one of estimate-lip, estimate-profile, bounds, invert, "
               "resolvent-scan, frame-perturb, atomic-perturb, dilate, schauder-check, demo)");
  }

  RunReport report;
  report.name = name;
  report.machine["schema"] = kReportSchema;
  report.machine["name"] = name;
  report.machine["seed"] = seed;
  report.machine["task"] = task;
  if (document.contains("theorem")) report.machine["theorem"] = document.at("theorem");
  report.machine["result"] = std::move(outcome.result);

  bool pass = outcome.ok;
  std::vector<std::string> expectation_lines;
  json expectation_entries = json::array();
  if (document.contains("expect")) {
    const json& expect = document.at("expect");
    if (!expect.is_object()) parse_fail("scenario: \"expect\" must be an object");
    expectation_entries =
        run_expectations(expect, report.machine, tolerance, pass, expectation_lines);
  }
  report.machine["expectations"] = expectation_entries;
  report.machine["pass"] = pass;
  report.pass = pass;

  std::ostringstream text;
  text << "scenario: " << name << "\n";
  text << kv("task", task);
  if (document.contains("theorem")) {
    text << kv("theorem", document.at("theorem").get<std::string>());
  }
  text << kv("seed", std::to_string(seed));
  for (const auto& line : lines) text << line;
  for (const auto& line : expectation_lines) text << line;
  text << kv("verdict", pass ? "PASS" : "FAIL");
  report.text = text.str();
  return report;
}

RunReport run_scenario_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open scenario file \"" + path + "\"");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("scenario JSON: ") + e.what());
  }
  return run_scenario_json(document, options);
}

}  // namespace lipkit
