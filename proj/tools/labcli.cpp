// Command-line surface of the laboratory: parameter classification,
// equivalence-ratio sweeps, divergence scenarios, membership scans, and a
// combined report bundle.  Exit codes: 0 all-pass, 2 failure, 3 inconclusive.

#include "bml/classify.hpp"
#include "bml/experiments.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>

namespace {

double parse_ext(const std::string& text)
{
    if (text == "inf") return INFINITY;
    return std::stod(text);
}

struct CommonOpts {
    std::string config;
    std::uint64_t seed = 0;  // 0 = leave the config's seed alone
    int grid_n = 0;
    std::string out = "report";
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config, "JSON config document");
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_option("--grid-n", opts.grid_n, "samples per axis override");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

bml::ParsedConfig load_or_default(const CommonOpts& opts, const std::string& experiment)
{
    bml::ParsedConfig cfg;
    if (!opts.config.empty()) {
        cfg = bml::parse_config_file(opts.config);
        if (cfg.experiment != experiment)
            throw std::invalid_argument("config is for experiment '" + cfg.experiment +
                                        "', expected '" + experiment + "'");
    } else {
        cfg.experiment = experiment;
        if (experiment == "equivalence") {
            cfg.equivalence.params = {1, 1.5, 2.0, 1.5, 2.0, 2.0, INFINITY, 2};
        } else if (experiment == "divergence") {
            cfg.divergence.scenario = "plateau-s0";
            cfg.divergence.params = {1, 0.0, 2.0, 2.0, 2.0, 2.0, INFINITY, 1};
            cfg.divergence.grid = {1, 1024.0, 32768};
        }
    }
    if (opts.seed) {
        cfg.equivalence.seed = opts.seed;
        cfg.divergence.seed = opts.seed;
        cfg.membership.seed = opts.seed;
    }
    if (opts.grid_n) {
        cfg.equivalence.grid.n = opts.grid_n;
        cfg.divergence.grid.n = opts.grid_n;
        cfg.membership.grid.n = opts.grid_n;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"numerical laboratory for smoothness-Morrey quasi-norms"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "classify a parameter tuple");
    int d = 1, N = 1;
    double s = 1, u = 2, p = 2;
    std::string q = "2", v = "2", a = "inf";
    classify->add_option("-d", d, "dimension");
    classify->add_option("-s", s, "smoothness");
    classify->add_option("-u", u, "Morrey exponent u");
    classify->add_option("-p", p, "integrability p");
    classify->add_option("-q", q, "summation exponent q (number or inf)");
    classify->add_option("-v", v, "inner exponent v (number or inf)");
    classify->add_option("-a", a, "outer limit a (number or inf)");
    classify->add_option("-N", N, "difference order");

    CommonOpts eq_opts, div_opts, mem_opts, rep_opts;
    auto* equivalence = app.add_subcommand("equivalence", "equivalence-ratio sweep");
    add_common(equivalence, eq_opts);
    auto* divergence = app.add_subcommand("divergence", "divergence scenario");
    add_common(divergence, div_opts);
    auto* membership = app.add_subcommand("membership", "membership boundary scan");
    add_common(membership, mem_opts);
    auto* report = app.add_subcommand("report", "standard bundle of experiments");
    add_common(report, rep_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            bml::SpaceParams P{d, s, u, p, parse_ext(q), parse_ext(v), parse_ext(a), N};
            bml::RegionVerdict verdict = bml::classify_parameters(P);
            const char* kind = verdict.kind == bml::RegionVerdict::Kind::equivalent
                                   ? "equivalent"
                                   : verdict.kind == bml::RegionVerdict::Kind::not_equivalent
                                         ? "not-equivalent"
                                         : "open";
            std::cout << kind << " [" << bml::tag_name(verdict.tag)
                      << "]: " << bml::tag_condition(verdict.tag) << "\n";
            for (const auto& m : verdict.matches)
                std::cout << "  matches " << bml::tag_name(m) << ": "
                          << bml::tag_condition(m) << "\n";
            return 0;
        }
        if (equivalence->parsed()) {
            auto cfg = load_or_default(eq_opts, "equivalence");
            auto rep = bml::run_equivalence_experiment(cfg.equivalence);
            return bml::emit_report(bml::results_for(rep), eq_opts.out, eq_opts.format);
        }
        if (divergence->parsed()) {
            auto cfg = load_or_default(div_opts, "divergence");
            auto rep = bml::run_divergence_experiment(cfg.divergence);
            return bml::emit_report(bml::results_for(rep), div_opts.out, div_opts.format);
        }
        if (membership->parsed()) {
            auto cfg = load_or_default(mem_opts, "membership");
            auto rep = bml::run_membership_scan(cfg.membership);
            return bml::emit_report(bml::results_for(rep), mem_opts.out, mem_opts.format);
        }
        if (report->parsed()) {
            bml::RunResults all;
            {
                bml::EquivalenceConfig c;
                c.params = {1, 1.5, 2.0, 1.5, 2.0, 2.0, INFINITY, 2};
                if (rep_opts.seed) c.seed = rep_opts.seed;
                merge_into(all, bml::results_for(bml::run_equivalence_experiment(c)));
            }
            {
                bml::DivergenceConfig c;
                c.scenario = "plateau-s0";
                c.params = {1, 0.0, 2.0, 2.0, 2.0, 2.0, INFINITY, 1};
                c.grid = {1, 1024.0, 32768};
                merge_into(all, bml::results_for(bml::run_divergence_experiment(c)));
            }
            {
                bml::DivergenceConfig c;
                c.scenario = "exp-bump";
                c.params = {1, 2.0, 2.0, 2.0, 2.0, 2.0, 1.0, 1};
                c.grid = {1, 16.0, 16384};
                merge_into(all, bml::results_for(bml::run_divergence_experiment(c)));
            }
            {
                bml::DivergenceConfig c;
                c.scenario = "oswald";
                c.params = {1, 1.0, 2.0, 2.0, INFINITY, 1.0, INFINITY, 1};
                merge_into(all, bml::results_for(bml::run_divergence_experiment(c)));
            }
            {
                bml::MembershipConfig c;
                if (rep_opts.seed) c.seed = rep_opts.seed;
                merge_into(all, bml::results_for(bml::run_membership_scan(c)));
            }
            return bml::emit_report(all, rep_opts.out, rep_opts.format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
