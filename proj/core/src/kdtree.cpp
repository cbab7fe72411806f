#include "gmi/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gmi {

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : points_(&points), dim_(points.cols()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    if (points.rows() == 0) throw std::invalid_argument("KdTree: empty point set");
    if (!points.all_finite()) throw std::invalid_argument("KdTree: non-finite coordinates");
    order_.resize(points.rows());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(2 * points.rows() / leaf_size_ + 2);
    build(0, static_cast<std::uint32_t>(points.rows()));
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, npos, npos});
    boxes_.resize(boxes_.size() + 2 * dim_);

    // Tight bounding box over the slice.
    double* lo = boxes_.data() + std::size_t(2) * id * dim_;
    double* hi = lo + dim_;
    for (std::size_t c = 0; c < dim_; ++c) {
        lo[c] = std::numeric_limits<double>::infinity();
        hi[c] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t k = begin; k < end; ++k) {
        const auto p = points_->row(order_[k]);
        for (std::size_t c = 0; c < dim_; ++c) {
            lo[c] = std::min(lo[c], p[c]);
            hi[c] = std::max(hi[c], p[c]);
        }
    }

    if (end - begin <= leaf_size_) return id;

    // Split at the median of the widest dimension.
    std::size_t split_dim = 0;
    double width = -1.0;
    for (std::size_t c = 0; c < dim_; ++c) {
        const double w = hi[c] - lo[c];
        if (w > width) {
            width = w;
            split_dim = c;
        }
    }
    if (width <= 0.0) return id;  // all points identical; keep as a leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double va = (*points_)(a, split_dim);
                         const double vb = (*points_)(b, split_dim);
                         if (va != vb) return va < vb;
                         return a < b;
                     });

    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double KdTree::box_distance2(std::uint32_t node, std::span<const double> q) const {
    const double* lo = boxes_.data() + std::size_t(2) * node * dim_;
    const double* hi = lo + dim_;
    double d2 = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
        double diff = 0.0;
        if (q[c] < lo[c])
            diff = lo[c] - q[c];
        else if (q[c] > hi[c])
            diff = q[c] - hi[c];
        d2 += diff * diff;
    }
    return d2;
}

void KdTree::nearest_descend(std::uint32_t node, std::span<const double> q,
                             double& best_d2, std::uint32_t& best_idx) const {
    const Node& nd = nodes_[node];
    if (nd.left == npos) {
        for (std::uint32_t k = nd.begin; k < nd.end; ++k) {
            const std::uint32_t idx = order_[k];
            const double d2 = squared_distance(points_->row(idx), q);
            if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
                best_d2 = d2;
                best_idx = idx;
            }
        }
        return;
    }
    const double dl = box_distance2(nd.left, q);
    const double dr = box_distance2(nd.right, q);
    const std::uint32_t first = dl <= dr ? nd.left : nd.right;
    const std::uint32_t second = dl <= dr ? nd.right : nd.left;
    const double dfirst = std::min(dl, dr);
    const double dsecond = std::max(dl, dr);
    if (dfirst <= best_d2) nearest_descend(first, q, best_d2, best_idx);
    if (dsecond <= best_d2) nearest_descend(second, q, best_d2, best_idx);
}

std::uint32_t KdTree::nearest(std::span<const double> query) const {
    double best_d2 = std::numeric_limits<double>::infinity();
    std::uint32_t best_idx = npos;
    nearest_descend(root(), query, best_d2, best_idx);
    return best_idx;
}

}  // namespace gmi
