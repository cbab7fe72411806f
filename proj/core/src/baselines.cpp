#include "gmi/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gmi/parallel.hpp"
#include "gmi/rng.hpp"

namespace gmi {

double kde_gmi(const PairedSampleSet& data, double p, const KdeConfig& cfg) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("kde_gmi: p must lie in (0, 1)");
    const std::size_t n = data.n();
    if (n < 10) throw std::invalid_argument("kde_gmi: need n >= 10");

    const std::size_t d = data.dim();
    double h = cfg.bandwidth;
    if (h == 0.0) h = std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 1.0));
    if (!(h > 0.0)) throw std::invalid_argument("kde_gmi: bandwidth must be positive");

    const double inv2h2 = 1.0 / (2.0 * h * h);
    const double q = 1.0 - p;

    // The product kernel factorizes over the x and y blocks, so one pairwise
    // pass yields the joint and both marginal kernel sums. Normalization
    // constants cancel in the ratio: r^_i = n S_xy / (S_x S_y).
    std::vector<double> inv_terms(n);
    parallel_for(n, [&](std::size_t i) {
        const auto xi = data.x_block(i);
        const auto yi = data.y_block(i);
        double sx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ex = std::exp(-squared_distance(xi, data.x_block(j)) * inv2h2);
            const double ey = std::exp(-squared_distance(yi, data.y_block(j)) * inv2h2);
            sx += ex;
            sy += ey;
            sxy += ex * ey;
        }
        // Leave-in sums include j == i, so sx, sy, sxy >= 1.
        const double ratio = static_cast<double>(n) * sxy / (sx * sy);
        inv_terms[i] = 1.0 / (p * ratio + q);
    });

    const double mean = kahan_sum(inv_terms) / static_cast<double>(n);
    return 1.0 - mean;
}

double gaussian_density_ratio(std::span<const double> x, std::span<const double> y, double rho) {
    if (x.size() != y.size())
        throw std::invalid_argument("gaussian_density_ratio: block dimensions differ");
    if (rho == 0.0) return 1.0;
    const double r2 = rho * rho;
    const double scale = 1.0 / (2.0 * (1.0 - r2));
    double log_ratio = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        log_ratio += (2.0 * rho * x[k] * y[k] - r2 * (x[k] * x[k] + y[k] * y[k])) * scale;
    const double norm = std::pow(1.0 - r2, -0.5 * static_cast<double>(x.size()));
    return norm * std::exp(log_ratio);
}

McEstimate mc_true_gmi(const TruthOracle& oracle) {
    if (oracle.mc_samples < 1000)
        throw std::invalid_argument("mc_true_gmi: mc_samples must be >= 1000");
    if (!(oracle.p > 0.0 && oracle.p < 1.0))
        throw std::invalid_argument("mc_true_gmi: p must lie in (0, 1)");
    const GaussianSpec& spec = oracle.family;
    if (!(std::fabs(spec.rho) < 1.0))
        throw std::invalid_argument("mc_true_gmi: covariance not positive definite");
    if (spec.rho != 0.0 && spec.d % 2 != 0)
        throw std::invalid_argument("mc_true_gmi: rho != 0 requires even d");
    if (spec.d < 2) throw std::invalid_argument("mc_true_gmi: d must be >= 2");

    const std::size_t pairs = static_cast<std::size_t>(spec.d) / 2;
    const double rho = spec.rho;
    const double resid = std::sqrt(1.0 - rho * rho);
    const double p = oracle.p, q = 1.0 - oracle.p;

    constexpr std::size_t kBatch = 1 << 14;
    const std::size_t batches = (oracle.mc_samples + kBatch - 1) / kBatch;
    std::vector<double> batch_sum(batches, 0.0), batch_sq(batches, 0.0);

    parallel_for(batches, [&](std::size_t b) {
        Rng rng(derive_seed(oracle.seed, b));
        const std::size_t count = std::min(kBatch, oracle.mc_samples - b * kBatch);
        std::vector<double> xs(pairs), ys(pairs);
        double sum = 0.0, sq = 0.0;
        for (std::size_t s = 0; s < count; ++s) {
            for (std::size_t k = 0; k < pairs; ++k) {
                xs[k] = rng.normal();
                ys[k] = rho * xs[k] + resid * rng.normal();
            }
            const double r = gaussian_density_ratio(xs, ys, rho);
            const double g = 1.0 / (p * r + q);
            sum += g;
            sq += g * g;
        }
        batch_sum[b] = sum;
        batch_sq[b] = sq;
    });

    // Deterministic reduction in batch order regardless of thread schedule.
    double total = 0.0, total_sq = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
        total += batch_sum[b];
        total_sq += batch_sq[b];
    }
    const double count = static_cast<double>(oracle.mc_samples);
    const double mean = total / count;
    const double var = std::max(0.0, (total_sq - count * mean * mean) / (count - 1.0));
    return McEstimate{1.0 - mean, std::sqrt(var / count)};
}

}  // namespace gmi
