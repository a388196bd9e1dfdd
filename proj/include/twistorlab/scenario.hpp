#pragma once

#include <twistorlab/balanced.hpp>
#include <twistorlab/twistor_product.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace twistorlab {

/// A scenario document violates the published schema.  `path` names the
/// offending field in dotted form ("numeric.fd_step", "suites[1].ids[0]",
/// "$" for the document root).
struct SchemaError : std::runtime_error {
    std::string path;
    SchemaError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), path(std::move(where)) {}
};

/// One requested verification suite.  `ids` applies to the "lemma" suite
/// only; empty means every identity meaningful at the scenario's fiber rank.
struct SuiteSpec {
    std::string suite;
    std::vector<std::string> ids;
};

/// Declarative run configuration.  JSON schema (all keys optional except
/// m, q and suites; unknown keys are rejected with their path):
///
///   {
///     "m":        {"kind": "torus"|"hopf", "k": int >= 1},
///     "q":        {"kind": "p1"|"p1xp1"|"hirzebruch"|"affine",
///                  "twist": int >= 0 (hirzebruch), "scale": number > 0 (hirzebruch),
///                  "n": int >= 1 (affine),
///                  "h": "id"|"square"|"conj"|"z1sq-plus-z2"|"proj<j>"},
///     "suites":   ["integrability" | "balanced-hk" | "balanced-submersion" |
///                  "cutoff" | "nonkahler" | "lemma2" | "covers" |
///                  {"suite": "lemma", "ids": ["0120q", ...]}, ...],
///     "samples":  {"count": int >= 1, "seed": uint64, "margin": number in [0, 0.9]},
///     "numeric":  {"fd_step": number > 0, "nested_step": number > 0,
///                  "stencil_order": 2|4|6, "tolerance": number > 0},
///     "balanced": {"t": number > 0, "gamma": number > 0,
///                  "t_prime": number > 0, "cutoff_t": number >= 0}
///   }
///
/// The sampling box is owned by the model charts; `margin` shrinks it by the
/// given fraction on every axis before drawing points.
struct Scenario {
    std::string m_kind = "torus";  // torus | hopf
    int k = 1;                     // quaternionic fiber rank, r = 2k

    std::string q_kind = "p1";  // p1 | p1xp1 | hirzebruch | affine
    int twist = 1;              // hirzebruch ruling degree
    double q_scale = 1.0;       // hirzebruch potential weight
    int q_n = 1;                // affine complex dimension
    std::string h = "id";       // map to the sphere chart

    std::vector<SuiteSpec> suites;

    int samples = 20;
    std::uint64_t seed = 1;
    double margin = 0.1;

    NumericConfig numeric;
    BalancedConfig balanced;
};

/// One pass/fail line of a report.  Entries are keyed by (suite, id) and
/// each requested suite contributes its entries exactly once.  For normal
/// entries pass means max_residual <= tolerance; entries with `inverted`
/// set are negative tests (non-holomorphic h under "integrability") and
/// pass when the residual exceeds the threshold instead.
struct SuiteEntry {
    std::string suite;
    std::string id;      // identity or check name within the suite
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool inverted = false;
    bool pass = false;
    double runtime_seconds = 0.0;
};

/// Full run record: the resolved scenario (defaults materialized, lemma ids
/// expanded) plus one entry per executed check.  Residuals replay bit-for-bit
/// from the embedded scenario under the same seed and step sizes.
struct Report {
    Scenario scenario;
    std::vector<SuiteEntry> entries;
    bool pass = true;
};

/// Parse a scenario document.  Throws SchemaError naming the offending field.
Scenario scenario_from_json(const std::string& text);

/// Read and parse a scenario file.  I/O failures surface as SchemaError with
/// the file path.
Scenario scenario_from_file(const std::string& path);

/// Serialize with every default materialized, full number precision.  The
/// output re-parses to an identical Scenario.
std::string scenario_to_json(const Scenario& sc);

/// Check suite prerequisites before any computation and resolve defaulted
/// lemma id lists in place.  Throws ContractError on violations: lemma ids
/// 11n1q/fq/f3q/f4q need r > 2, projection maps need a matching fiber
/// dimension, the balanced and witness suites need the flat fiber model, and
/// the non-holomorphic map is admitted only under "integrability".
void validate_scenario(Scenario& sc);

/// Validate, then execute every suite in order against one deterministic
/// generator seeded from the scenario.  Per-check tolerances are pinned
/// here, not configurable.  Throws ContractError for precondition failures
/// and NumericalError/ChartError when a construction breaks down.
Report run_scenario(Scenario sc);

/// Machine-readable report with the scenario echo under "scenario".
std::string report_to_json(const Report& rep);

/// Human-readable table, one line per entry plus an overall verdict.
std::string report_summary(const Report& rep);

}  // namespace twistorlab
