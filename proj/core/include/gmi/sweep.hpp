#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gmi/fr.hpp"
#include "gmi/samples.hpp"

namespace gmi {

enum class EstimatorKind { FR, KDE };
enum class TruthSource { Zero, MonteCarlo };

/// One experiment grid: the cartesian product of the d, n, rho, and alpha
/// axes, each cell estimated over `trials` seeded repetitions.
struct SweepPlan {
    EstimatorKind estimator = EstimatorKind::FR;
    std::vector<int> d_grid;
    std::vector<std::size_t> n_grid;
    std::vector<double> rho_grid{0.0};
    std::vector<double> alpha_grid{0.5};
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    TruthSource truth = TruthSource::Zero;
    std::size_t mc_samples = 1'000'000;
    ShuffleMode shuffle = ShuffleMode::Permutation;
    std::size_t mst_cutoff = 512;

    void validate() const;
    std::size_t cell_count() const {
        return d_grid.size() * n_grid.size() * rho_grid.size() * alpha_grid.size();
    }
};

struct SweepCell {
    EstimatorKind estimator;
    int d;
    std::size_t n;
    double rho;
    double alpha;
    std::size_t trials_run;  ///< 0 for skipped (infeasible) cells
    double mean;
    double mse;
    double std_error;
    double seconds;  ///< summed per-trial estimator time
    double truth;
};

struct SweepResult {
    std::vector<SweepCell> cells;

    /// CSV with header estimator,d,n,rho,alpha,trials,mean,mse,stderr,seconds.
    /// with_timing=false zeroes the seconds column, making the bytes a pure
    /// function of (plan, seed).
    std::string to_csv(bool with_timing = true) const;
};

/// Runs the plan. Deterministic given the seed: trial t of cell c draws its
/// streams from derive_seed-chained (plan.seed, c, t). Cells marked skipped
/// when round(alpha*n) leaves a subset smaller than 2.
SweepResult run_sweep(const SweepPlan& plan);

/// Parses the key=value plan format (see README): one key per line, comma
/// lists for grid axes, '#' comments.
SweepPlan parse_plan(std::istream& in);
SweepPlan parse_plan_file(const std::string& path);

struct RuntimePoint {
    std::size_t n;
    double fr_seconds;
    double kde_seconds;
};

/// Median-of-reps wall time of one FR estimate vs one KDE estimate on the
/// same standard-normal data, per n.
std::vector<RuntimePoint> runtime_compare(std::span<const std::size_t> n_grid, int d,
                                          std::uint64_t seed, int reps = 3, double alpha = 0.5);

struct EnvelopePoint {
    std::size_t n;
    double bias_bound;      ///< max{ n^(-eta^2/(d(1+eta))), (beta n)^(-eta/(1+eta)), c_d 2^d / n }
    double variance_bound;  ///< (1 - alpha) c_d / n
};

/// Theoretical rate envelopes with unit leading constants, for overlaying
/// against empirical MSE curves. c_d = 0 selects the dimension default.
std::vector<EnvelopePoint> theoretical_envelope(std::span<const std::size_t> n_grid, int d,
                                                double eta, double alpha, double c_d = 0.0);

}  // namespace gmi
