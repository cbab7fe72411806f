// gmi: command-line front end for the geometric mutual information library.
//
// Subcommands: estimate, baseline-kde, truth, alpha, analytic, simulate, mst.
// Machine-readable output goes to stdout (JSON by default, CSV via
// --output csv); diagnostics go to stderr. Exit codes: 0 success, 1 input
// error, 2 internal numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmi/alpha_opt.hpp"
#include "gmi/baselines.hpp"
#include "gmi/divergence.hpp"
#include "gmi/fr.hpp"
#include "gmi/mst.hpp"
#include "gmi/samples.hpp"
#include "gmi/sweep.hpp"

using nlohmann::json;

namespace {

struct GlobalFlags {
    std::uint64_t seed = 0;
    std::string output = "json";
    bool quiet = false;
};

void emit_record(const json& record, const GlobalFlags& flags) {
    if (flags.output == "csv") {
        std::string header, row;
        for (auto it = record.begin(); it != record.end(); ++it) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += it.key();
            if (it.value().is_string())
                row += it.value().get<std::string>();
            else
                row += it.value().dump();
        }
        std::cout << header << '\n' << row << '\n';
    } else {
        std::cout << record.dump() << '\n';
    }
}

void note(const GlobalFlags& flags, const std::string& message) {
    if (!flags.quiet) std::cerr << message << '\n';
}

int run_estimate(const std::string& input, std::size_t dx, std::size_t dy, double alpha,
                 std::uint64_t seed, const std::string& shuffle, bool clamp,
                 std::size_t mst_cutoff, const GlobalFlags& flags) {
    const gmi::PairedSampleSet data = gmi::load_csv(input, dx, dy);
    gmi::SplitShuffleConfig cfg;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.shuffle_mode =
        shuffle == "indep" ? gmi::ShuffleMode::IndependentDraw : gmi::ShuffleMode::Permutation;
    gmi::EstimatorConfig est;
    est.clamp = clamp;
    est.mst.dualtree_cutoff = mst_cutoff;

    const gmi::GmiEstimate e = gmi::estimate_gmi(data, cfg, est);
    json record{{"value", e.value},       {"r", e.r},
                {"n_prime", e.n_prime},   {"n_dprime", e.n_dprime},
                {"alpha", e.alpha},       {"seed", e.seed}};
    if (clamp) record["clamped"] = e.clamped;
    emit_record(record, flags);
    return 0;
}

int run_kde(const std::string& input, std::size_t dx, std::size_t dy, double p, double bandwidth,
            const GlobalFlags& flags) {
    const gmi::PairedSampleSet data = gmi::load_csv(input, dx, dy);
    gmi::KdeConfig cfg;
    cfg.bandwidth = bandwidth;
    const double value = gmi::kde_gmi(data, p, cfg);
    const double used = bandwidth > 0.0
                            ? bandwidth
                            : std::pow(static_cast<double>(data.n()),
                                       -1.0 / (static_cast<double>(data.dim()) + 1.0));
    emit_record(json{{"value", value}, {"p", p}, {"bandwidth", used}, {"n", data.n()}}, flags);
    return 0;
}

int run_truth(int d, double rho, double p, std::size_t mc_samples, std::uint64_t seed,
              const GlobalFlags& flags) {
    gmi::TruthOracle oracle;
    oracle.family = gmi::GaussianSpec{d, rho, 2, 0};
    oracle.p = p;
    oracle.mc_samples = mc_samples;
    oracle.seed = seed;
    const gmi::McEstimate est = gmi::mc_true_gmi(oracle);
    emit_record(json{{"value", est.value},
                     {"std_error", est.std_error},
                     {"d", d},
                     {"rho", rho},
                     {"p", p},
                     {"mc_samples", mc_samples},
                     {"seed", seed}},
                flags);
    return 0;
}

const char* case_name(gmi::AlphaCase c) {
    switch (c) {
        case gmi::AlphaCase::LowerBound: return "lower_bound";
        case gmi::AlphaCase::UpperBound: return "upper_bound";
        case gmi::AlphaCase::InteriorRoot: return "interior_root";
    }
    return "unknown";
}

int run_alpha(const gmi::DensityBounds& bounds, const gmi::RateConstants& consts,
              const GlobalFlags& flags) {
    const gmi::AlphaSolution sol = gmi::select_alpha(bounds, consts);
    json record{{"alpha_tilde", sol.alpha_tilde},
                {"case", case_name(sol.saddle_case)},
                {"interval", json::array({sol.alpha_lo, sol.alpha_hi})},
                {"xi_endpoints", json::array({sol.xi_lo, sol.xi_hi})}};
    if (sol.grid_fallback) record["grid_fallback"] = true;
    emit_record(record, flags);
    return 0;
}

int run_analytic(std::size_t sweeps, std::uint64_t seed, const GlobalFlags& flags) {
    const auto checks = gmi::run_property_sweeps(sweeps, seed);
    bool pass = true;
    json props = json::array();
    for (const auto& c : checks) {
        json entry{{"name", c.name},
                   {"checked", c.checked},
                   {"violations", c.violations},
                   {"max_violation", c.max_violation}};
        if (c.violations > 0) {
            entry["counterexample"] = c.counterexample;
            pass = false;
        }
        props.push_back(entry);
    }
    std::cout << json{{"sweeps", sweeps}, {"seed", seed}, {"pass", pass}, {"properties", props}}
                     .dump()
              << '\n';
    return 0;
}

int run_simulate(const std::string& plan_path, const std::string& out_path, bool no_timing,
                 std::uint64_t seed_override, bool seed_given, const GlobalFlags& flags) {
    gmi::SweepPlan plan = gmi::parse_plan_file(plan_path);
    if (seed_given) plan.seed = seed_override;
    const gmi::SweepResult result = gmi::run_sweep(plan);
    const std::string csv = result.to_csv(!no_timing);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        out << csv;
        note(flags, "simulate: wrote " + std::to_string(result.cells.size()) + " cells to " +
                        out_path);
    }
    return 0;
}

int run_mst(const std::string& input, const std::string& algorithm, std::size_t cutoff,
            const GlobalFlags& flags) {
    (void)flags;
    const gmi::Matrix points = gmi::load_matrix_csv(input);
    gmi::SpanningTree tree;
    if (algorithm == "quad") {
        tree = gmi::mst_quadratic(points);
    } else if (algorithm == "dualtree") {
        tree = gmi::mst_dualtree(points);
    } else {
        gmi::MstConfig cfg;
        cfg.dualtree_cutoff = cutoff;
        tree = gmi::minimum_spanning_tree(points, cfg);
    }
    for (const auto& e : tree.edges)
        std::printf("%u,%u,%.17g\n", e.i, e.j, e.w);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric mutual information estimation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "Base seed for all randomized subcommands")
        ->capture_default_str();
    app.add_option("--output", flags.output, "Output format for record subcommands")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_flag("--quiet", flags.quiet, "Suppress diagnostics on stderr");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "FR randomized-shuffle estimate of the GMI");
    std::string est_input, est_shuffle = "perm";
    std::size_t est_dx = 1, est_dy = 1, est_cutoff = 512;
    double est_alpha = 0.5;
    bool est_clamp = false;
    estimate->add_option("--input", est_input, "CSV of samples (dx x-columns then dy y-columns)")
        ->required();
    estimate->add_option("--dx", est_dx, "x-block dimension")->required()->check(CLI::PositiveNumber);
    estimate->add_option("--dy", est_dy, "y-block dimension")->required()->check(CLI::PositiveNumber);
    estimate->add_option("--alpha", est_alpha, "proportionality parameter in (0,1)")
        ->capture_default_str();
    estimate->add_option("--shuffle", est_shuffle, "y-block shuffle mode")
        ->check(CLI::IsMember({"perm", "indep"}))
        ->capture_default_str();
    estimate->add_flag("--clamp", est_clamp, "truncate the raw estimate into [0,1]");
    estimate->add_option("--mst-cutoff", est_cutoff, "point count above which the dual-tree MST runs")
        ->capture_default_str();

    // baseline-kde
    auto* kde = app.add_subcommand("baseline-kde", "KDE plug-in estimate of the GMI");
    std::string kde_input;
    std::size_t kde_dx = 1, kde_dy = 1;
    double kde_p = 0.5, kde_bandwidth = 0.0;
    kde->add_option("--input", kde_input, "CSV of samples")->required();
    kde->add_option("--dx", kde_dx, "x-block dimension")->required()->check(CLI::PositiveNumber);
    kde->add_option("--dy", kde_dy, "y-block dimension")->required()->check(CLI::PositiveNumber);
    kde->add_option("--p", kde_p, "divergence parameter in (0,1)")->capture_default_str();
    kde->add_option("--bandwidth", kde_bandwidth, "kernel bandwidth (default n^(-1/(d+1)))");

    // truth
    auto* truth = app.add_subcommand("truth", "Monte-Carlo ground truth for the Gaussian family");
    int truth_d = 2;
    double truth_rho = 0.0, truth_p = 0.5;
    std::size_t truth_samples = 1'000'000;
    truth->add_option("--d", truth_d, "total dimension")->capture_default_str();
    truth->add_option("--rho", truth_rho, "pairwise correlation in (-1,1)")->required();
    truth->add_option("--p", truth_p, "divergence parameter in (0,1)")->capture_default_str();
    truth->add_option("--mc-samples", truth_samples, "Monte-Carlo sample count")
        ->capture_default_str();

    // alpha
    auto* alpha = app.add_subcommand("alpha", "Minimax proportionality-parameter selection");
    gmi::DensityBounds bounds;
    gmi::RateConstants consts;
    alpha->add_option("--cl-xy", bounds.cl_xy, "joint density lower bound C^L_XY")->required();
    alpha->add_option("--cu-xy", bounds.cu_xy, "joint density upper bound C^U_XY")->required();
    alpha->add_option("--cl-x", bounds.cl_x, "x marginal lower bound C^L_X")->required();
    alpha->add_option("--cu-x", bounds.cu_x, "x marginal upper bound C^U_X")->required();
    alpha->add_option("--cl-y", bounds.cl_y, "y marginal lower bound C^L_Y")->required();
    alpha->add_option("--cu-y", bounds.cu_y, "y marginal upper bound C^U_Y")->required();
    alpha->add_option("--eta", bounds.eta, "smoothness parameter in (0,1]")->capture_default_str();
    alpha->add_option("--d", bounds.d, "dimension")->capture_default_str();
    alpha->add_option("--n", bounds.n, "sample size")->required();
    alpha->add_option("--volume", bounds.volume, "support volume V(S_XY)")->capture_default_str();
    alpha->add_option("--c", consts.c, "rate constant c")->capture_default_str();
    alpha->add_option("--c-prime", consts.c_prime, "rate constant c'")->capture_default_str();
    alpha->add_option("--c1", consts.c1, "rate constant c_1")->capture_default_str();
    alpha->add_option("--c2", consts.c2, "rate constant c_2")->capture_default_str();
    alpha->add_option("--c-dprime", consts.c_dprime, "rate constant c''")->capture_default_str();
    alpha->add_option("--c1-prime", consts.c1_prime, "rate constant c'_1")->capture_default_str();
    alpha->add_option("--c-d", consts.c_d, "dimensional constant c_d (default: MST degree bound)");

    // analytic
    auto* analytic = app.add_subcommand("analytic", "Randomized property sweeps of the identities");
    std::size_t analytic_sweeps = 1000;
    analytic->add_option("--sweeps", analytic_sweeps, "instances per property")
        ->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run an experiment sweep from a plan file");
    std::string sim_plan, sim_out;
    bool sim_no_timing = false;
    simulate->add_option("--plan", sim_plan, "key=value plan file")->required();
    simulate->add_option("--out", sim_out, "output CSV path (default stdout)");
    simulate->add_flag("--no-timing", sim_no_timing, "zero the seconds column (byte-reproducible)");

    // mst
    auto* mst = app.add_subcommand("mst", "Emit the Euclidean MST edge list as CSV i,j,w");
    std::string mst_input, mst_algorithm = "auto";
    std::size_t mst_cutoff = 512;
    mst->add_option("--input", mst_input, "CSV of points (all columns coordinates)")->required();
    mst->add_option("--algorithm", mst_algorithm, "MST backend")
        ->check(CLI::IsMember({"auto", "quad", "dualtree"}))
        ->capture_default_str();
    mst->add_option("--cutoff", mst_cutoff, "auto-backend point-count cutoff")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // exit 1 on any usage error, 0 for --help
    }

    const bool seed_given = app.count("--seed") > 0;
    try {
        if (*estimate)
            return run_estimate(est_input, est_dx, est_dy, est_alpha, flags.seed, est_shuffle,
                                est_clamp, est_cutoff, flags);
        if (*kde) return run_kde(kde_input, kde_dx, kde_dy, kde_p, kde_bandwidth, flags);
        if (*truth)
            return run_truth(truth_d, truth_rho, truth_p, truth_samples, flags.seed, flags);
        if (*alpha) return run_alpha(bounds, consts, flags);
        if (*analytic) return run_analytic(analytic_sweeps, flags.seed, flags);
        if (*simulate)
            return run_simulate(sim_plan, sim_out, sim_no_timing, flags.seed, seed_given, flags);
        if (*mst) return run_mst(mst_input, mst_algorithm, mst_cutoff, flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
