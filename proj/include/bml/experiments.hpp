/** \file experiments.hpp
    \brief Experiment harness: equivalence-ratio sweeps, divergence scenarios,
           membership scans, and deterministic report emission.

    Every runner is deterministic under a fixed seed; reports re-emit byte
    for byte.  Divergence is always read off a partial-value trajectory
    against the scenario's truncation parameter, never off a single number.
*/
#pragma once

#include "bml/classify.hpp"
#include "bml/diffnorm.hpp"
#include "bml/grid.hpp"
#include "bml/morrey.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bml {

struct LinFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    int points = 0;
};
LinFit linfit(const std::vector<double>& x, const std::vector<double>& y);

struct GridSpec {
    int d = 1;
    double R = 8;
    int n = 4096;
    Grid make() const { return make_grid(d, R, n); }
};

// ---------------------------------------------------------------------------
// equivalence-ratio experiment
// ---------------------------------------------------------------------------

struct EquivalenceConfig {
    SpaceParams params;                 ///< must classify as equivalent
    GridSpec grid;
    std::string pair = "va";            ///< "va" | "modulus" | "club" | "spade"
    std::string family = "mixed";       ///< "mixed" | "band-limited"
    int count = 20;                     ///< functions in the family
    std::uint64_t seed = 1;
    int K_max = 8;
    int ladder_per_octave = 2;
    int center_stride = 4;
    int modulus_h_cap = 64;
    double ratio_envelope = 50;         ///< acceptance bound on max/min ratio
    double stability_tol = 0.10;        ///< per-function ratio drift under refinement
};

struct EquivalenceReport {
    struct Row {
        int index = 0;
        std::string kind;        ///< band-limited | bump | translated
        double lp_norm = 0;      ///< Littlewood-Paley side
        double diff_norm = 0;    ///< difference side
        double ratio = 0;
        double ratio_refined = 0;
        double drift = 0;        ///< |ratio_refined/ratio - 1|
    };
    std::vector<Row> rows;
    int excluded_zero = 0;
    double ratio_min = 0, ratio_max = 0, ratio_median = 0;
    double worst_drift = 0;
    bool pass = false;
    Truncation lp_trunc;    ///< truncation record of the Littlewood-Paley side
    Truncation diff_trunc;  ///< truncation record of the difference side
    EquivalenceConfig config;
};

EquivalenceReport run_equivalence_experiment(const EquivalenceConfig& cfg);

// ---------------------------------------------------------------------------
// divergence experiments
// ---------------------------------------------------------------------------

/// Scenarios:
///   "plateau-s0":   plateau bump at s=0, a=inf; partial^q against ln T,
///                   plus an equivalent-regime control through the same
///                   pipeline which must come out convergent.
///   "exp-bump":     exponential bump with N <= s; partials against the
///                   lower scale cutoff eps halving.
///   "oswald":       lacunary sum at N = s, q = inf, p = u, v >= 1;
///                   partial^p against the summand count parameter l,
///                   evaluated scale-by-scale (see the implementation notes
///                   on the exact substitution it rests on).
///   "f-alpha-delta": singular profile just outside the membership region;
///                   Littlewood-Paley partials against the band cutoff.
struct DivergenceConfig {
    std::string scenario = "plateau-s0";
    SpaceParams params;
    GridSpec grid;
    std::uint64_t seed = 1;
    // plateau
    std::vector<double> t_heads = {8, 16, 32, 64, 128, 256, 512};
    // exp-bump
    int halvings = 8;
    // oswald
    int oswald_r = 5;
    std::vector<int> oswald_l = {8, 9, 10, 11, 12, 13, 14};
    // f-alpha-delta
    double alpha = -0.25;
    double delta = 0;
    // verdict thresholds (artifact conventions, recorded in the report)
    double min_r2 = 0.9;
    int min_points = 5;
    double top_growth = 0.02;  ///< relative top-window increase separating growth from saturation
};

struct DivergenceReport {
    std::string scenario;
    std::vector<std::pair<double, double>> trajectory;  ///< (parameter, partial)
    LinFit fit;             ///< in the scenario's regression coordinates
    std::string verdict;    ///< diverges | convergent | inconclusive
    double slope_window_ratio = 0;  ///< second-window slope / first-window slope
    std::string control_verdict;    ///< plateau only
    // oswald extras
    double reference_exponent = 0;  ///< measured difference-integral power law
    double reference_r2 = 0;
    std::vector<double> atomic_blocks;
    double profile_lower_constant = 0;
    std::vector<std::string> notes;
    DivergenceConfig config;
};

DivergenceReport run_divergence_experiment(const DivergenceConfig& cfg);

// ---------------------------------------------------------------------------
// membership scan
// ---------------------------------------------------------------------------

struct MembershipConfig {
    GridSpec grid = {1, 8.0, 32768};
    double u = 2, p = 2, q = 2;
    double alpha = -0.25;
    double delta = 0;
    double theta = 0.45;               ///< wide cutoff keeps its spectral footprint below the fit window
    std::vector<double> scan = {0.05, 0.15, 0.35, 0.45};
    int K_max = 11;
    int fit_lo = 5, fit_hi = 8;        ///< band window for the slope fit
    double boundary_margin = 0.05;     ///< |s - threshold| below this is flagged
    std::uint64_t seed = 1;
};

struct MembershipReport {
    struct Row {
        double s = 0;
        double slope = 0;        ///< fitted log2 block slope
        double r2 = 0;
        std::string oracle;      ///< member | not-member
        std::string measured;    ///< member | not-member | boundary-excluded
        bool boundary = false;
        bool agree = false;      ///< only meaningful when not boundary
    };
    std::vector<Row> rows;
    double threshold = 0;        ///< d/u + alpha
    double agreement = 0;        ///< fraction among non-boundary rows
    std::vector<double> blocks;  ///< shared Littlewood-Paley block Morrey values
    MembershipConfig config;
};

MembershipReport run_membership_scan(const MembershipConfig& cfg);

// ---------------------------------------------------------------------------
// report emission
// ---------------------------------------------------------------------------

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Everything one run writes: an ordered manifest, fixed-schema tables, and
/// plot-ready (x,y) series.  status: 0 all-pass, 2 failure, 3 inconclusive.
struct RunResults {
    std::vector<std::pair<std::string, std::string>> manifest;
    std::vector<Table> tables;
    std::vector<Series> series;
    int status = 0;
};

std::string format_double(double v);

/// Norm estimates serialize into the report schema: the partial trajectory
/// as a plot-ready series, the truncation record as manifest entries.
Series series_for(const NormEstimate& est, const std::string& name);
void manifest_truncation(RunResults& out, const Truncation& t, const std::string& prefix);

RunResults results_for(const EquivalenceReport& rep);
RunResults results_for(const DivergenceReport& rep);
RunResults results_for(const MembershipReport& rep);
void merge_into(RunResults& all, const RunResults& one);

/// Writes manifest.json, one CSV (or JSON) file per table, and one
/// .series.csv per series into out_dir; returns the status as exit code.
int emit_report(const RunResults& results, const std::string& out_dir,
                const std::string& format = "csv");

// ---------------------------------------------------------------------------
// config documents
// ---------------------------------------------------------------------------

/// Parse a JSON config document; unknown keys anywhere are rejected.
/// "experiment" selects which config to fill.
struct ParsedConfig {
    std::string experiment;  ///< equivalence | divergence | membership
    EquivalenceConfig equivalence;
    DivergenceConfig divergence;
    MembershipConfig membership;
};
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

} // namespace bml
