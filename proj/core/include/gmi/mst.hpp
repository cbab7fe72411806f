#pragma once

#include <cstdint>
#include <vector>

#include "gmi/matrix.hpp"

namespace gmi {

/// Exact Euclidean minimum spanning tree. Edges are stored with i < j and the
/// list sorted by (i, j); total_weight is the sum of Euclidean edge lengths.
///
/// Degenerate inputs (tied distances, duplicate points) are resolved by a
/// fixed total order on edges: (squared length, i, j) lexicographically. The
/// resulting tree is the unique MST under that order, so both algorithms and
/// any faithful oracle agree edge for edge.
struct SpanningTree {
    struct Edge {
        std::uint32_t i = 0;
        std::uint32_t j = 0;
        double w = 0.0;
    };

    std::vector<Edge> edges;
    double total_weight = 0.0;

    std::size_t point_count() const { return edges.size() + 1; }
};

/// O(n^2) Prim reference implementation.
SpanningTree mst_quadratic(const Matrix& points);

/// Boruvka rounds with kd-tree accelerated component-neighbor searches;
/// same contract as mst_quadratic, subquadratic for moderate dimensions.
SpanningTree mst_dualtree(const Matrix& points, std::size_t leaf_size = 32);

struct MstConfig {
    /// Point counts above this use the dual-tree algorithm.
    std::size_t dualtree_cutoff = 512;
    std::size_t leaf_size = 32;
};

/// Backend-selecting front door.
SpanningTree minimum_spanning_tree(const Matrix& points, const MstConfig& cfg = {});

}  // namespace gmi
