#include <array>
#include <map>
#include <string>
#include <vector>

#include "lipkit/error.hpp"
#include "lipkit/scenario.hpp"

namespace lipkit {

namespace {

// Every demo is a complete scenario document, so `demo foo` and `run` on the
// same JSON behave identically. Expected values are spelled out to full
// double precision; the runner compares them at the scenario tolerance.

constexpr const char* kHildingIdentity = R"json({
  "schema": "lipkit-scenario/1",
  "name": "hilding-identity",
  "seed": 1,
  "task": "bounds",
  "theorem": "Hilding perturbation theorem",
  "notes": "lambda = 0 collapses every interval to the unperturbed isometry.",
  "params": {"formula": "hilding", "lambda": 0.0},
  "expect": {
    "result.report.lip_T_lower": 1.0,
    "result.report.lip_T_upper": 1.0,
    "result.report.lip_Tinv_lower": 1.0,
    "result.report.lip_Tinv_upper": 1.0,
    "result.report.invertibility_threshold": 1.0
  }
})json";

constexpr const char* kHildingHalf = R"json({
  "schema": "lipkit-scenario/1",
  "name": "hilding-half",
  "seed": 2,
  "task": "bounds",
  "theorem": "Hilding perturbation theorem",
  "params": {"formula": "hilding", "lambda": 0.5},
  "expect": {
    "result.report.lip_T_lower": 0.3333333333333333,
    "result.report.lip_T_upper": 3.0,
    "result.report.lip_Tinv_lower": 0.3333333333333333,
    "result.report.lip_Tinv_upper": 3.0,
    "result.report.invertibility_threshold": 0.3333333333333333
  }
})json";

constexpr const char* kCasazzaKaltonMain = R"json({
  "schema": "lipkit-scenario/1",
  "name": "casazza-kalton-main",
  "seed": 3,
  "task": "bounds",
  "theorem": "Casazza-Kalton perturbation theorem (improved form)",
  "notes": "Two-sided Lipschitz windows for T and its inverse from the sandwich constants.",
  "params": {"formula": "main", "lambda1": 0.5, "lambda2": 0.25, "lip_S": 2.0, "lip_S_inv": 0.5},
  "expect": {
    "result.report.lip_T_lower": 0.8,
    "result.report.lip_T_upper": 4.0,
    "result.report.lip_Tinv_lower": 0.25,
    "result.report.lip_Tinv_upper": 1.25,
    "result.report.invertibility_threshold": 0.4
  }
})json";

constexpr const char* kGuoFixedEpsilon = R"json({
  "schema": "lipkit-scenario/1",
  "name": "guo-fixed-epsilon",
  "seed": 4,
  "task": "bounds",
  "theorem": "Guo perturbation theorem",
  "notes": "lambda2 = 1 is allowed: epsilon trades slack from the T side to the S side.",
  "params": {"formula": "guo", "lambda1": 0.3, "lambda2": 1.0, "epsilon": 0.1, "lip_TS_inv": 1.0},
  "expect": {
    "result.report.lip_T_lower": 0.3157894736842105,
    "result.report.lip_T_upper": 14.000000000000002,
    "result.report.lip_Tinv_lower": 0.07142857142857141,
    "result.report.lip_Tinv_upper": 3.1666666666666665,
    "result.report.invertibility_threshold": 0.3157894736842105
  }
})json";

constexpr const char* kGuoEpsilonSweep = R"json({
  "schema": "lipkit-scenario/1",
  "name": "guo-epsilon-sweep",
  "seed": 5,
  "task": "bounds",
  "theorem": "Guo perturbation theorem",
  "notes": "Grid search over epsilon; smallest certified Lip(T^-1) upper bound wins.",
  "params": {
    "formula": "guo-sweep",
    "lambda1": 0.3,
    "lambda2": 1.0,
    "lip_TS_inv": 1.0,
    "eps_grid": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
  },
  "expect": {
    "result.epsilon": 0.1,
    "result.report.lip_Tinv_upper": 3.1666666666666665
  }
})json";

constexpr const char* kPCombinedReduction = R"json({
  "schema": "lipkit-scenario/1",
  "name": "p-combined-reduction",
  "seed": 6,
  "task": "bounds",
  "theorem": "Casazza-Kalton perturbation theorem (p-combined form)",
  "notes": "For 0 < p < 1 the combined inequality reduces at the cost of 2^{1/p-1}.",
  "params": {"formula": "p-combined", "lambda1": 0.2, "lambda2": 0.3, "p": 0.5},
  "expect": {
    "result.lambda1_reduced": 0.4,
    "result.lambda2_reduced": 0.6
  }
})json";

constexpr const char* kLambdaTwoOne = R"json({
  "schema": "lipkit-scenario/1",
  "name": "lambda2-one",
  "seed": 7,
  "task": "bounds",
  "theorem": "Guo perturbation theorem (lambda2 = 1 corollary)",
  "params": {"formula": "lambda2-one", "lambda": 0.4, "lip_S_inv": 1.0},
  "expect": {
    "result.lip_Tinv_upper": 3.3333333333333335
  }
})json";

constexpr const char* kSoderlind = R"json({
  "schema": "lipkit-scenario/1",
  "name": "soderlind",
  "seed": 8,
  "task": "bounds",
  "theorem": "Soderlind-Campanato perturbation theorem",
  "params": {"formula": "soderlind", "alpha": 2.0, "beta": 0.5},
  "expect": {
    "result.lip_Ainv_upper": 4.0
  }
})json";

constexpr const char* kBarbagallo = R"json({
  "schema": "lipkit-scenario/1",
  "name": "barbagallo",
  "seed": 9,
  "task": "bounds",
  "theorem": "Barbagallo-Ernst-Thera perturbation theorem",
  "notes": "Non-Hilbert form; the Hilbert variant sharpens to (1 + beta) / alpha.",
  "params": {"formula": "barbagallo", "alpha": 1.0, "beta": 0.25, "hilbert": false},
  "expect": {
    "result.lip_Ainv_upper": 1.5
  }
})json";

constexpr const char* kPicardRate = R"json({
  "schema": "lipkit-scenario/1",
  "name": "picard-rate",
  "seed": 10,
  "task": "bounds",
  "theorem": "Picard contraction rate for the perturbation inverse",
  "notes": "q = (lambda1 + lambda2) / (1 - lambda2) drives every certified solve.",
  "params": {"formula": "q-rate", "lambda1": 0.4, "lambda2": 0.2},
  "expect": {
    "result.q": 0.75
  }
})json";

constexpr const char* kProfileFrontier = R"json({
  "schema": "lipkit-scenario/1",
  "name": "profile-frontier",
  "seed": 11,
  "task": "estimate-profile",
  "theorem": "Casazza-Kalton perturbation theorem (improved form)",
  "notes": "Both maps are invertible affine, so the frontier is certified, not just sampled.",
  "spaces": {"plane": {"dim": 2, "p": 2}},
  "params": {
    "S": {
      "kind": "affine", "domain": "plane", "codomain": "plane",
      "matrix": [[2.0, 0.0], [0.0, 1.0]], "offset": [0.0, 0.0]
    },
    "T": {
      "kind": "affine", "domain": "plane", "codomain": "plane",
      "matrix": [[2.2, 0.0], [0.0, 1.2]], "offset": [0.0, 0.0]
    }
  },
  "expect": {
    "result.profile.globally_certified": true,
    "result.profile.lambda1": {"max": 1e-12},
    "result.profile.lambda2": 0.16666666666666666,
    "result.profile.mu": 0.0
  }
})json";

constexpr const char* kResolventInterval = R"json({
  "schema": "lipkit-scenario/1",
  "name": "resolvent-interval",
  "seed": 12,
  "task": "resolvent-scan",
  "theorem": "Casazza-Kalton perturbation theorem (resolvent interval)",
  "notes": "alpha S - T stays invertible left of the threshold; T has no real eigenvalue.",
  "spaces": {"plane": {"dim": 2, "p": 2}},
  "params": {
    "S": {
      "kind": "affine", "domain": "plane", "codomain": "plane",
      "matrix": [[1.0, 0.0], [0.0, 1.0]], "offset": [0.0, 0.0]
    },
    "T": {
      "kind": "affine", "domain": "plane", "codomain": "plane",
      "matrix": [[0.3, 0.1], [-0.1, 0.3]], "offset": [0.0, 0.0]
    },
    "profile": {"lambda1": 0.75, "lambda2": 0.0},
    "alpha_grid": {"from": -2.0, "to": 0.2, "count": 12},
    "sampler": {"count": 40}
  },
  "expect": {
    "result.scan.threshold": 0.25,
    "result.scan.any_violation": false,
    "result.scan.entries.11.within_guarantee": true,
    "result.scan.entries.11.exact_invertible": true
  }
})json";

constexpr const char* kInvertTanh = R"json({
  "schema": "lipkit-scenario/1",
  "name": "invert-tanh",
  "seed": 13,
  "task": "invert",
  "theorem": "Picard contraction rate for the perturbation inverse",
  "notes": "x + 0.2 tanh(x) is a certified perturbation of the identity with q = 0.2.",
  "spaces": {"cube": {"dim": 3, "p": 2}},
  "params": {
    "T": {
      "kind": "componentwise", "domain": "cube", "family": "tanh",
      "params": {"eps": 0.2, "beta": 1.0}
    },
    "S": {
      "kind": "affine", "domain": "cube", "codomain": "cube",
      "matrix": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
      "offset": [0.0, 0.0, 0.0]
    },
    "y": [0.3, -0.4, 0.1],
    "profile": {"lambda1": 0.2, "lambda2": 0.0}
  },
  "expect": {
    "result.certificate.contraction_mode": "picard-contractive",
    "result.certificate.q": 0.2,
    "result.certificate.residual": {"max": 1e-10},
    "result.certificate.error_radius": {"max": 2e-10}
  }
})json";

constexpr const char* kTranslateNormalize = R"json({
  "schema": "lipkit-scenario/1",
  "name": "translate-normalize",
  "seed": 14,
  "task": "estimate-lip",
  "theorem": "translation-to-origin reduction",
  "notes": "Moving the base point to the origin never changes Lipschitz data.",
  "spaces": {"plane": {"dim": 2, "p": 2}},
  "params": {
    "map": {
      "kind": "translated",
      "children": [{
        "kind": "affine", "domain": "plane", "codomain": "plane",
        "matrix": [[2.0, 0.0], [0.0, 0.5]], "offset": [3.0, -1.0]
      }]
    },
    "sampler": {"count": 80}
  },
  "expect": {
    "result.map_kind": "translated",
    "result.exact": 2.0,
    "result.estimate.lower": {"min": 1.99}
  }
})json";

constexpr const char* kStabilityFrame = R"json({
  "schema": "lipkit-scenario/1",
  "name": "stability-frame",
  "seed": 15,
  "task": "frame-perturb",
  "theorem": "metric frame stability theorem",
  "notes": "The Mercedes tight frame survives a tanh synthesis perturbation with a mu term.",
  "spaces": {
    "plane": {"dim": 2, "p": 2},
    "coeff": {"dim": 3, "p": 2},
    "line": {"dim": 1, "p": 2}
  },
  "maps": {
    "synthesis": {
      "kind": "affine", "domain": "coeff", "codomain": "plane",
      "matrix": [
        [0.6666666666666666, -0.3333333333333333, -0.3333333333333333],
        [0.0, 0.5773502691896257, -0.5773502691896257]
      ],
      "offset": [0.0, 0.0]
    }
  },
  "params": {
    "frame": {
      "functionals": [
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[1.0, 0.0]], "offset": [0.0]},
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[-0.5, 0.8660254037844386]], "offset": [0.0]},
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[-0.5, -0.8660254037844386]], "offset": [0.0]}
      ],
      "seq_space": "coeff",
      "synthesis": "synthesis",
      "claimed_bounds": [1.224744871391589, 1.224744871391589]
    },
    "T": {
      "kind": "composite",
      "children": [
        "synthesis",
        {"kind": "componentwise", "domain": "plane", "family": "tanh",
         "params": {"eps": 0.05, "beta": 1.0}}
      ]
    },
    "profile": {"lambda1": 0.04, "lambda2": 0.0, "mu": 0.009},
    "sampler": {"count": 48}
  },
  "expect": {
    "result.bounds_within_claimed": true,
    "result.claimed.0": 1.1652886915895715,
    "result.claimed.1": 1.2905944919343484,
    "result.estimate.reconstruction_max_error": {"max": 1e-07},
    "result.profile.mu": 0.009
  }
})json";

constexpr const char* kAtomicPerturbation = R"json({
  "schema": "lipkit-scenario/1",
  "name": "atomic-perturbation",
  "seed": 16,
  "task": "atomic-perturb",
  "theorem": "atomic decomposition perturbation theorem",
  "notes": "Dilated atoms 1.1 e_n keep reconstruction after re-solving the functionals.",
  "spaces": {
    "plane": {"dim": 2, "p": 2},
    "coeff": {"dim": 2, "p": 2},
    "line": {"dim": 1, "p": 2}
  },
  "params": {
    "decomposition": {
      "functionals": [
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[1.0, 0.0]], "offset": [0.0]},
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[0.0, 1.0]], "offset": [0.0]}
      ],
      "space": "plane",
      "atoms": [[1.0, 0.0], [0.0, 1.0]],
      "seq_space": "coeff",
      "claimed_bounds": [1.0, 1.0]
    },
    "new_atoms": [[1.1, 0.0], [0.0, 1.1]],
    "profile": {"lambda1": 0.1, "lambda2": 0.0},
    "sampler": {"count": 40}
  },
  "expect": {
    "result.validation.pass": true,
    "result.validation.reconstruction_ok": true,
    "result.claimed.0": 0.9090909090909091,
    "result.claimed.1": 1.1111111111111112
  }
})json";

constexpr const char* kLippelDilation = R"json({
  "schema": "lipkit-scenario/1",
  "name": "lippel-dilation",
  "seed": 17,
  "task": "dilate",
  "theorem": "Lipschitz Pelczynski dilation theorem",
  "notes": "The middle atom is zero, so its functional is dropped and its slot splits off.",
  "spaces": {
    "plane": {"dim": 2, "p": 2},
    "coeff": {"dim": 3, "p": 2},
    "line": {"dim": 1, "p": 2}
  },
  "params": {
    "decomposition": {
      "functionals": [
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[1.0, 0.0]], "offset": [0.0]},
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[1.0, 1.0]], "offset": [0.0]},
        {"kind": "affine", "domain": "plane", "codomain": "line",
         "matrix": [[0.0, 1.0]], "offset": [0.0]}
      ],
      "space": "plane",
      "atoms": [[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]],
      "seq_space": "coeff",
      "claimed_bounds": [1.0, 1.7320508075688772]
    },
    "verify_samples": 64
  },
  "expect": {
    "result.dilation.zero_atom_indices": [1],
    "result.dilation.normalized_indices": [1],
    "result.dilation.Z.dim": 3,
    "result.dilation.Z.norm": "direct-sum-max",
    "result.dilation.basis.1": [0.0, 0.0, 1.0]
  }
})json";

constexpr const char* kSchauderBasisCheck = R"json({
  "schema": "lipkit-scenario/1",
  "name": "schauder-basis-check",
  "seed": 18,
  "task": "schauder-check",
  "theorem": "finite Schauder basis characterization",
  "notes": "Nonzero atoms spanning the space pass; the basis constant is sampled.",
  "spaces": {"plane": {"dim": 2, "p": 2}},
  "params": {
    "space": "plane",
    "atoms": [[1.0, 0.0], [0.7, 0.7]],
    "sample_count": 150
  },
  "expect": {
    "result.report.pass": true,
    "result.report.rank": 2,
    "result.report.all_nonzero": true,
    "result.report.spans": true,
    "result.report.basis_constant_estimate": {"min": 0.999999999}
  }
})json";

struct DemoEntry {
  const char* name;
  const char* text;
};

constexpr std::array<DemoEntry, 18> kCatalog = {{
    {"hilding-identity", kHildingIdentity},
    {"hilding-half", kHildingHalf},
    {"casazza-kalton-main", kCasazzaKaltonMain},
    {"guo-fixed-epsilon", kGuoFixedEpsilon},
    {"guo-epsilon-sweep", kGuoEpsilonSweep},
    {"p-combined-reduction", kPCombinedReduction},
    {"lambda2-one", kLambdaTwoOne},
    {"soderlind", kSoderlind},
    {"barbagallo", kBarbagallo},
    {"picard-rate", kPicardRate},
    {"profile-frontier", kProfileFrontier},
    {"resolvent-interval", kResolventInterval},
    {"invert-tanh", kInvertTanh},
    {"translate-normalize", kTranslateNormalize},
    {"stability-frame", kStabilityFrame},
    {"atomic-perturbation", kAtomicPerturbation},
    {"lippel-dilation", kLippelDilation},
    {"schauder-basis-check", kSchauderBasisCheck},
}};

const std::map<std::string, json>& catalog_table() {
  static const std::map<std::string, json> table = [] {
    std::map<std::string, json> out;
    for (const auto& entry : kCatalog) out.emplace(entry.name, json::parse(entry.text));
    return out;
  }();
  return table;
}

}  // namespace

std::vector<std::string> demo_names() {
  std::vector<std::string> names;
  names.reserve(kCatalog.size());
  for (const auto& entry : kCatalog) names.push_back(entry.name);
  return names;
}

const json& demo_scenario(const std::string& name) {
  const auto& table = catalog_table();
  auto it = table.find(name);
  if (it == table.end()) {
    fail(ErrorKind::domain, "unknown demo \"" + name + "\"; the demos verb lists the catalog");
  }
  return it->second;
}

}  // namespace lipkit
