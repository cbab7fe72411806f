#include "gmi/fr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmi/parallel.hpp"
#include "gmi/rng.hpp"

namespace gmi {

FrStatistic fr_statistic(const SpanningTree& tree, std::span<const int> labels) {
    if (labels.size() != tree.point_count())
        throw std::invalid_argument("fr_statistic: label count does not match point count");
    std::size_t n1 = 0, n2 = 0;
    for (int l : labels) {
        if (l == 1)
            ++n1;
        else if (l == 2)
            ++n2;
        else
            throw std::invalid_argument("fr_statistic: labels must be 1 or 2");
    }
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("fr_statistic: both groups must be present");

    std::uint64_t r = 0;
    for (const auto& e : tree.edges)
        if (labels[e.i] != labels[e.j]) ++r;
    return FrStatistic{r, n1, n2};
}

GmiEstimate estimate_gmi(const PairedSampleSet& data, const SplitShuffleConfig& cfg,
                         const EstimatorConfig& est) {
    const SplitShuffleResult split = split_and_shuffle(data, cfg);
    const std::size_t n_prime = split.first.n();
    const std::size_t n_dprime = split.shuffled.n();
    const std::size_t dim = data.dim();

    Matrix pooled(n_prime + n_dprime, dim);
    std::vector<int> labels(n_prime + n_dprime);
    for (std::size_t i = 0; i < n_prime; ++i) {
        const auto src = split.first.points.row(i);
        std::copy(src.begin(), src.end(), pooled.row(i).begin());
        labels[i] = 1;
    }
    for (std::size_t i = 0; i < n_dprime; ++i) {
        const auto src = split.shuffled.points.row(i);
        std::copy(src.begin(), src.end(), pooled.row(n_prime + i).begin());
        labels[n_prime + i] = 2;
    }

    const SpanningTree tree = minimum_spanning_tree(pooled, est.mst);
    const FrStatistic fr = fr_statistic(tree, labels);

    const double np = static_cast<double>(n_prime);
    const double ns = static_cast<double>(n_dprime);
    double value = 1.0 - static_cast<double>(fr.r) * (np + ns) / (2.0 * np * ns);
    bool clamped = false;
    if (est.clamp) {
        const double t = std::clamp(value, 0.0, 1.0);
        clamped = t != value;
        value = t;
    }

    return GmiEstimate{value, cfg.alpha, fr.r, n_prime, n_dprime, cfg.seed, clamped};
}

std::pair<std::vector<GmiEstimate>, TrialsSummary>
estimate_gmi_trials(const SampleGenerator& generate, const SplitShuffleConfig& base_cfg,
                    std::size_t trials, double truth, const EstimatorConfig& est) {
    if (trials < 1) throw std::invalid_argument("estimate_gmi_trials: trials must be >= 1");

    std::vector<GmiEstimate> estimates(trials);
    parallel_for(trials, [&](std::size_t t) {
        const std::uint64_t trial_seed = base_cfg.seed + t;
        SplitShuffleConfig cfg = base_cfg;
        cfg.seed = derive_seed(trial_seed, 1);
        const PairedSampleSet data = generate(derive_seed(trial_seed, 0));
        GmiEstimate e = estimate_gmi(data, cfg, est);
        e.seed = trial_seed;
        estimates[t] = e;
    });

    TrialsSummary summary;
    summary.trials = trials;
    double sum = 0.0, sq = 0.0;
    for (const auto& e : estimates) {
        sum += e.value;
        sq += (e.value - truth) * (e.value - truth);
    }
    summary.mean = sum / static_cast<double>(trials);
    summary.mse = sq / static_cast<double>(trials);
    if (trials > 1) {
        double var = 0.0;
        for (const auto& e : estimates) {
            const double d = e.value - summary.mean;
            var += d * d;
        }
        var /= static_cast<double>(trials - 1);
        summary.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    return {std::move(estimates), summary};
}

}  // namespace gmi
