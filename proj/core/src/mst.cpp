#include "gmi/mst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gmi/kdtree.hpp"

namespace gmi {

namespace {

// Total order on candidate edges: squared length, then canonical endpoints.
struct EdgeKey {
    double d2 = std::numeric_limits<double>::infinity();
    std::uint32_t a = 0;
    std::uint32_t b = 0;

    static EdgeKey make(double d2, std::uint32_t i, std::uint32_t j) {
        return EdgeKey{d2, std::min(i, j), std::max(i, j)};
    }

    bool operator<(const EdgeKey& o) const {
        if (d2 != o.d2) return d2 < o.d2;
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // keep the smaller index as representative
        parent[b] = a;
        return true;
    }

    std::vector<std::uint32_t> parent;
};

void validate_points(const Matrix& points) {
    if (points.rows() < 2)
        throw std::invalid_argument("minimum spanning tree needs at least 2 points");
    if (!points.all_finite())
        throw std::invalid_argument("minimum spanning tree: non-finite coordinates");
}

void finalize(SpanningTree& tree) {
    std::sort(tree.edges.begin(), tree.edges.end(), [](const auto& x, const auto& y) {
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    double sum = 0.0, comp = 0.0;
    for (const auto& e : tree.edges) {
        const double y = e.w - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    tree.total_weight = sum;
}

}  // namespace

SpanningTree mst_quadratic(const Matrix& points) {
    validate_points(points);
    const std::uint32_t n = static_cast<std::uint32_t>(points.rows());

    std::vector<bool> in_tree(n, false);
    std::vector<double> best_d2(n);
    std::vector<std::uint32_t> best_from(n, 0);

    in_tree[0] = true;
    for (std::uint32_t v = 1; v < n; ++v)
        best_d2[v] = squared_distance(points.row(v), points.row(0));

    SpanningTree tree;
    tree.edges.reserve(n - 1);

    for (std::uint32_t step = 1; step < n; ++step) {
        EdgeKey best;
        std::uint32_t pick = KdTree::npos;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const EdgeKey key = EdgeKey::make(best_d2[v], v, best_from[v]);
            if (key < best) {
                best = key;
                pick = v;
            }
        }
        tree.edges.push_back({best.a, best.b, std::sqrt(best.d2)});
        in_tree[pick] = true;

        const auto pv = points.row(pick);
        for (std::uint32_t u = 0; u < n; ++u) {
            if (in_tree[u]) continue;
            const double d2 = squared_distance(points.row(u), pv);
            if (EdgeKey::make(d2, u, pick) < EdgeKey::make(best_d2[u], u, best_from[u])) {
                best_d2[u] = d2;
                best_from[u] = pick;
            }
        }
    }

    finalize(tree);
    return tree;
}

namespace {

/// One Boruvka search: the best outgoing edge from point p's component via
/// the kd-tree, sharing the component-wide bound for pruning.
void component_neighbor_search(const KdTree& tree, const Matrix& points, UnionFind& uf,
                               const std::vector<std::uint32_t>& node_comp,
                               std::uint32_t p, std::uint32_t cp, EdgeKey& cand,
                               std::uint32_t node) {
    if (node_comp[node] == cp) return;  // subtree entirely inside p's component
    const auto q = points.row(p);
    if (tree.box_distance2(node, q) > cand.d2) return;

    const KdTree::Node& nd = tree.nodes()[node];
    if (nd.left == KdTree::npos) {
        const auto& order = tree.point_order();
        for (std::uint32_t k = nd.begin; k < nd.end; ++k) {
            const std::uint32_t idx = order[k];
            if (uf.find(idx) == cp) continue;
            const double d2 = squared_distance(points.row(idx), q);
            const EdgeKey key = EdgeKey::make(d2, p, idx);
            if (key < cand) cand = key;
        }
        return;
    }

    const double dl = tree.box_distance2(nd.left, q);
    const double dr = tree.box_distance2(nd.right, q);
    if (dl <= dr) {
        component_neighbor_search(tree, points, uf, node_comp, p, cp, cand, nd.left);
        component_neighbor_search(tree, points, uf, node_comp, p, cp, cand, nd.right);
    } else {
        component_neighbor_search(tree, points, uf, node_comp, p, cp, cand, nd.right);
        component_neighbor_search(tree, points, uf, node_comp, p, cp, cand, nd.left);
    }
}

}  // namespace

SpanningTree mst_dualtree(const Matrix& points, std::size_t leaf_size) {
    validate_points(points);
    const std::uint32_t n = static_cast<std::uint32_t>(points.rows());
    const KdTree tree(points, leaf_size);
    UnionFind uf(n);

    SpanningTree result;
    result.edges.reserve(n - 1);

    const std::size_t node_count = tree.nodes().size();
    std::vector<std::uint32_t> node_comp(node_count, KdTree::npos);
    std::vector<std::uint32_t> comp_slot(n, KdTree::npos);
    std::vector<std::uint32_t> roots;
    std::vector<EdgeKey> cands;

    while (result.edges.size() + 1 < n) {
        // Mark subtrees whose points all share one component (children were
        // created after their parent, so a reverse sweep sees them first).
        for (std::size_t id = node_count; id-- > 0;) {
            const KdTree::Node& nd = tree.nodes()[id];
            if (nd.left == KdTree::npos) {
                std::uint32_t comp = uf.find(tree.point_order()[nd.begin]);
                for (std::uint32_t k = nd.begin + 1; k < nd.end && comp != KdTree::npos; ++k)
                    if (uf.find(tree.point_order()[k]) != comp) comp = KdTree::npos;
                node_comp[id] = comp;
            } else {
                const std::uint32_t lc = node_comp[nd.left];
                node_comp[id] = (lc != KdTree::npos && lc == node_comp[nd.right]) ? lc : KdTree::npos;
            }
        }

        roots.clear();
        cands.clear();
        for (std::uint32_t p = 0; p < n; ++p) {
            const std::uint32_t cp = uf.find(p);
            std::uint32_t slot = comp_slot[cp];
            if (slot == KdTree::npos) {
                slot = static_cast<std::uint32_t>(roots.size());
                comp_slot[cp] = slot;
                roots.push_back(cp);
                cands.emplace_back();
            }
            component_neighbor_search(tree, points, uf, node_comp, p, cp, cands[slot], tree.root());
        }
        for (const std::uint32_t r : roots) comp_slot[r] = KdTree::npos;

        std::sort(cands.begin(), cands.end());
        for (const EdgeKey& key : cands) {
            if (!std::isfinite(key.d2)) continue;
            if (uf.unite(key.a, key.b))
                result.edges.push_back({key.a, key.b, std::sqrt(key.d2)});
        }
    }

    finalize(result);
    return result;
}

SpanningTree minimum_spanning_tree(const Matrix& points, const MstConfig& cfg) {
    if (points.rows() > cfg.dualtree_cutoff) return mst_dualtree(points, cfg.leaf_size);
    return mst_quadratic(points);
}

}  // namespace gmi
