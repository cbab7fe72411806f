#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gmi/mst.hpp"
#include "gmi/samples.hpp"

namespace gmi {

/// Friedman-Rafsky statistic: number of MST edges joining the two groups.
struct FrStatistic {
    std::uint64_t r = 0;   ///< bichromatic edge count
    std::size_t n1 = 0;    ///< group-1 size
    std::size_t n2 = 0;    ///< group-2 size
};

/// Counts tree edges whose endpoints carry different labels. labels[i] must
/// be 1 or 2, one per tree point, and both groups must be present.
FrStatistic fr_statistic(const SpanningTree& tree, std::span<const int> labels);

struct EstimatorConfig {
    bool clamp = false;  ///< truncate the raw estimate into [0, 1]
    MstConfig mst;
};

/// One run of the randomized-shuffle estimator with its provenance.
struct GmiEstimate {
    double value = 0.0;
    double alpha = 0.0;
    std::uint64_t r = 0;
    std::size_t n_prime = 0;
    std::size_t n_dprime = 0;
    std::uint64_t seed = 0;
    bool clamped = false;
};

/// Full estimation pipeline: split, shuffle, pool, MST, crossing count,
/// then value = 1 - r * (n' + n'') / (2 n' n''). The estimated I_p has
/// p = cfg.alpha. Deterministic given (data, cfg).
GmiEstimate estimate_gmi(const PairedSampleSet& data, const SplitShuffleConfig& cfg,
                         const EstimatorConfig& est = {});

using SampleGenerator = std::function<PairedSampleSet(std::uint64_t seed)>;

struct TrialsSummary {
    double mean = 0.0;
    double mse = 0.0;        ///< mean of (estimate - truth)^2
    double std_error = 0.0;  ///< sample standard deviation of estimates / sqrt(trials)
    std::size_t trials = 0;
};

/// Runs `trials` independent estimates with trial seeds base_cfg.seed + t,
/// t = 0..trials-1. Within each trial the data generator and the splitter
/// receive distinct derived sub-seeds. Trials run in parallel; results are
/// ordered by trial index regardless of scheduling.
std::pair<std::vector<GmiEstimate>, TrialsSummary>
estimate_gmi_trials(const SampleGenerator& generate, const SplitShuffleConfig& base_cfg,
                    std::size_t trials, double truth, const EstimatorConfig& est = {});

}  // namespace gmi
