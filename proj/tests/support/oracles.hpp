#pragma once

// Independent reference implementations used to check the library. These
// deliberately avoid the library's algorithm paths: the MST oracle is a
// from-scratch Kruskal over the complete graph, the divergence oracles are
// direct transcriptions of the defining sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "gmi/matrix.hpp"
#include "gmi/mst.hpp"
#include "gmi/rng.hpp"

namespace oracles {

/// Brute-force Kruskal over all n(n-1)/2 edges with the same total order the
/// library pins for ties: (squared weight, i, j).
inline gmi::SpanningTree kruskal_mst(const gmi::Matrix& points) {
    const std::uint32_t n = static_cast<std::uint32_t>(points.rows());
    struct E {
        double d2;
        std::uint32_t i, j;
    };
    std::vector<E> all;
    all.reserve(std::size_t(n) * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            all.push_back({gmi::squared_distance(points.row(i), points.row(j)), i, j});
    std::sort(all.begin(), all.end(), [](const E& a, const E& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    gmi::SpanningTree tree;
    for (const E& e : all) {
        const std::uint32_t a = find(e.i), b = find(e.j);
        if (a == b) continue;
        parent[a] = b;
        tree.edges.push_back({e.i, e.j, std::sqrt(e.d2)});
        if (tree.edges.size() + 1 == n) break;
    }
    std::sort(tree.edges.begin(), tree.edges.end(), [](const auto& a, const auto& b) {
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    tree.total_weight = 0.0;
    for (const auto& e : tree.edges) tree.total_weight += e.w;
    return tree;
}

inline bool same_edge_set(const gmi::SpanningTree& a, const gmi::SpanningTree& b) {
    if (a.edges.size() != b.edges.size()) return false;
    for (std::size_t k = 0; k < a.edges.size(); ++k)
        if (a.edges[k].i != b.edges[k].i || a.edges[k].j != b.edges[k].j) return false;
    return true;
}

/// Direct transcription of the divergence sum, no shared code with the
/// library implementation.
inline double direct_hp_sum(std::span<const double> f, std::span<const double> g, double p) {
    const double q = 1.0 - p;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (p * f[i] + q * g[i] > 0.0)
            s += std::pow(p * f[i] - q * g[i], 2) / (p * f[i] + q * g[i]);
    return (s - std::pow(p - q, 2)) / (4.0 * p * q);
}

/// Direct affinity sum over an explicit joint table (row-major kx x ky).
inline double direct_affinity_sum(const std::vector<double>& joint, std::size_t kx, std::size_t ky,
                                  double p) {
    std::vector<double> fx(kx, 0.0), fy(ky, 0.0);
    for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t y = 0; y < ky; ++y) {
            fx[x] += joint[x * ky + y];
            fy[y] += joint[x * ky + y];
        }
    double a = 0.0;
    for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t y = 0; y < ky; ++y) {
            const double num = joint[x * ky + y] * fx[x] * fy[y];
            const double den = p * joint[x * ky + y] + (1.0 - p) * fx[x] * fy[y];
            if (den > 0.0) a += num / den;
        }
    return a;
}

/// Uniformly-ish random rotation: QR-style Gram-Schmidt of a Gaussian matrix.
inline std::vector<double> random_rotation(std::size_t d, gmi::Rng& rng) {
    std::vector<double> q(d * d);
    for (std::size_t col = 0; col < d; ++col) {
        std::vector<double> v(d);
        for (auto& x : v) x = rng.normal();
        for (std::size_t prev = 0; prev < col; ++prev) {
            double dot = 0.0;
            for (std::size_t r = 0; r < d; ++r) dot += v[r] * q[r * d + prev];
            for (std::size_t r = 0; r < d; ++r) v[r] -= dot * q[r * d + prev];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < d; ++r) q[r * d + col] = v[r] / norm;
    }
    return q;
}

/// points <- scale * R * points + shift (rowwise).
inline gmi::Matrix transform_points(const gmi::Matrix& pts, const std::vector<double>& rot,
                                    double scale, const std::vector<double>& shift) {
    const std::size_t d = pts.cols();
    gmi::Matrix out(pts.rows(), d);
    for (std::size_t r = 0; r < pts.rows(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += rot[i * d + j] * pts(r, j);
            out(r, i) = scale * s + shift[i];
        }
    }
    return out;
}

/// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
