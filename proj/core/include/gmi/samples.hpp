#pragma once

#include <cstdint>
#include <string>

#include "gmi/matrix.hpp"

namespace gmi {

/// n joint samples z_i = (x_i, y_i): an n x (dx+dy) coordinate matrix where
/// the first dx columns are the x block and the remaining dy the y block.
struct PairedSampleSet {
    Matrix points;
    std::size_t dx = 0;
    std::size_t dy = 0;

    PairedSampleSet() = default;
    PairedSampleSet(Matrix pts, std::size_t dx, std::size_t dy);

    std::size_t n() const { return points.rows(); }
    std::size_t dim() const { return dx + dy; }

    std::span<const double> x_block(std::size_t row) const {
        return points.row(row).subspan(0, dx);
    }
    std::span<const double> y_block(std::size_t row) const {
        return points.row(row).subspan(dx, dy);
    }
};

enum class ShuffleMode {
    /// One uniform random permutation re-pairs the y blocks (Algorithm step
    /// "shuffle first and second elements").
    Permutation,
    /// Every output row draws its x index and y index independently and
    /// uniformly, so each (x_i, y_j) pair has selection probability 1/n''^2.
    IndependentDraw,
};

struct SplitShuffleConfig {
    double alpha = 0.5;
    std::uint64_t seed = 0;
    ShuffleMode shuffle_mode = ShuffleMode::Permutation;
};

/// Synthetic multivariate normal family used by the experiments. rho == 0
/// gives a standard normal in d dimensions; rho != 0 requires even d and
/// correlates coordinate pairs (x_i, y_i) with unit variances, which for
/// d == 2 is exactly the covariance [[1, rho], [rho, 1]].
struct GaussianSpec {
    int d = 2;
    double rho = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Parses a CSV of samples: one sample per line, dx x-coordinates then dy
/// y-coordinates, comma delimiter, optional header line. Rejects rows with
/// the wrong field count and any non-finite value, reporting row and column.
PairedSampleSet load_csv(const std::string& path, std::size_t dx, std::size_t dy);

/// Parses a headerless/header CSV of points with a uniform column count.
Matrix load_matrix_csv(const std::string& path);

/// Deterministic i.i.d. draws from the spec's Gaussian family.
PairedSampleSet generate_gaussian(const GaussianSpec& spec);

struct SplitShuffleResult {
    PairedSampleSet first;     ///< Z'_{n'} : kept as observed
    PairedSampleSet second;    ///< Z''_{n''}: pre-shuffle complement (kept for auditing)
    PairedSampleSet shuffled;  ///< Z~_{n''}: x blocks of Z'' re-paired with y blocks
};

/// Splits the sample into Z' of size n' = round(alpha*n) (half-up) and Z'' of
/// size n'' = n - n', by taking the first n' positions of a seeded uniform
/// permutation of the rows, then re-pairs the y blocks of Z'' per
/// cfg.shuffle_mode. Both subset sizes must be at least 2.
SplitShuffleResult split_and_shuffle(const PairedSampleSet& data, const SplitShuffleConfig& cfg);

/// n' = round(alpha * n) with .5 rounding half-up.
std::size_t split_size(double alpha, std::size_t n);

}  // namespace gmi
