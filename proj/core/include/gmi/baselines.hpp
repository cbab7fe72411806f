#pragma once

#include <cstdint>
#include <span>

#include "gmi/samples.hpp"

namespace gmi {

struct KdeConfig {
    /// Gaussian product-kernel bandwidth; 0 selects n^(-1/(d+1)) with
    /// d = dx + dy. One shared h is used for the joint and both marginals.
    double bandwidth = 0.0;
};

/// Plug-in estimate of I_p via leave-in (resubstitution) kernel density
/// estimates: 1 - (1/n) sum_i (p r^(z_i) + q)^(-1) with
/// r^ = f^_XY / (f^_X f^_Y). O(n^2).
double kde_gmi(const PairedSampleSet& data, double p, const KdeConfig& cfg = {});

/// Monte-Carlo ground truth for the Gaussian family via the expectation form
/// of the affinity: unbiased, with a standard error.
struct TruthOracle {
    GaussianSpec family;
    double p = 0.5;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 0;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

McEstimate mc_true_gmi(const TruthOracle& oracle);

/// Exact density ratio f_XY / (f_X f_Y) for the pairwise-correlated Gaussian
/// family at a joint point (x, y); factorizes over coordinate pairs.
double gaussian_density_ratio(std::span<const double> x, std::span<const double> y, double rho);

}  // namespace gmi
