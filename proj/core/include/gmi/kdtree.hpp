#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gmi/matrix.hpp"

namespace gmi {

/// Balanced kd-tree over an n x D point matrix. Median split on the widest
/// box dimension; leaves keep up to leaf_size points. The node layout is
/// exposed read-only so tree-walking algorithms (dual-tree Boruvka) can
/// traverse it without going through the query interface.
class KdTree {
public:
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    struct Node {
        std::uint32_t begin = 0;     ///< range of point_order() covered by this node
        std::uint32_t end = 0;
        std::uint32_t left = npos;   ///< child node ids; npos for leaves
        std::uint32_t right = npos;
    };

    explicit KdTree(const Matrix& points, std::size_t leaf_size = 32);

    std::size_t size() const { return points_->rows(); }
    std::size_t dim() const { return dim_; }

    const std::vector<Node>& nodes() const { return nodes_; }
    std::uint32_t root() const { return 0; }

    /// Point indices in tree order; nodes()[k] covers a contiguous slice.
    const std::vector<std::uint32_t>& point_order() const { return order_; }

    std::span<const double> box_lo(std::uint32_t node) const {
        return {boxes_.data() + std::size_t(2) * node * dim_, dim_};
    }
    std::span<const double> box_hi(std::uint32_t node) const {
        return {boxes_.data() + (std::size_t(2) * node + 1) * dim_, dim_};
    }

    /// Squared distance from a point to a node's bounding box (0 if inside).
    double box_distance2(std::uint32_t node, std::span<const double> q) const;

    /// Exact nearest neighbor; ties broken toward the smaller point index.
    /// Returns npos only for an empty tree.
    std::uint32_t nearest(std::span<const double> query) const;

    std::span<const double> point(std::uint32_t index) const { return points_->row(index); }

private:
    std::uint32_t build(std::uint32_t begin, std::uint32_t end);
    void nearest_descend(std::uint32_t node, std::span<const double> q,
                         double& best_d2, std::uint32_t& best_idx) const;

    const Matrix* points_ = nullptr;
    std::size_t dim_ = 0;
    std::size_t leaf_size_ = 32;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
    std::vector<double> boxes_;
};

}  // namespace gmi
