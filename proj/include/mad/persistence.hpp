#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "mad/error.hpp"
#include "mad/ulbp.hpp"

namespace mad {

struct FiltrationParams {
    int max_dim = 1;         // homology dimensions computed: 0..max_dim
    double threshold = 25.0; // last filtration value; bars alive here become essential
};

struct Bar {
    double birth = 0.0;
    double death = 0.0;
    bool essential = false;
    friend auto operator<=>(const Bar&, const Bar&) = default;
};

struct PersistenceBarcode {
    double threshold = 0.0;
    std::vector<Bar> dim0;
    std::vector<Bar> dim1;
};

namespace detail {

inline std::int64_t sq_dist(const Point& a, const Point& b) {
    const std::int64_t dr = a.row - b.row;
    const std::int64_t dc = a.col - b.col;
    return dr * dr + dc * dc;
}

struct RipsEdge {
    std::int64_t d2 = 0;
    std::int32_t u = 0;
    std::int32_t v = 0; // u < v
};

struct UnionFind {
    std::vector<std::int32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]]; // path halving
            x = parent[x];
        }
        return x;
    }

    bool unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

// Column entry for the degree-1 coboundary reduction: a triangle identified
// by its packed vertex triple, ordered by (diameter^2, packed key). That
// order is the simplexwise filtration order restricted to triangles, with
// distance ties broken lexicographically.
struct ColEntry {
    std::int64_t d2 = 0;
    std::uint64_t key = 0;
    friend bool operator<(const ColEntry& a, const ColEntry& b) {
        return a.d2 != b.d2 ? a.d2 < b.d2 : a.key < b.key;
    }
    friend bool operator==(const ColEntry& a, const ColEntry& b) { return a.key == b.key; }
};

// Working column as a lazy min-heap over Z/2: entries appear with
// multiplicity, equal pairs cancel as they surface.
struct WorkingColumn {
    // std::priority_queue is a max-heap, so invert the comparison
    struct Later {
        bool operator()(const ColEntry& a, const ColEntry& b) const { return b < a; }
    };
    std::priority_queue<ColEntry, std::vector<ColEntry>, Later> heap;

    void push(const ColEntry& e) { heap.push(e); }

    std::optional<ColEntry> pop_pivot() {
        while (!heap.empty()) {
            ColEntry e = heap.top();
            heap.pop();
            if (!heap.empty() && heap.top().key == e.key) {
                heap.pop(); // the duplicate cancels mod 2
            } else {
                return e;
            }
        }
        return std::nullopt;
    }
};

inline void sort_bars(std::vector<Bar>& bars) {
    std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        if (a.death != b.death) return a.death < b.death;
        return a.essential < b.essential;
    });
}

} // namespace detail

/// Persistence barcode of the Vietoris-Rips filtration over a 2D integer
/// point cloud with Euclidean edge lengths, truncated at params.threshold.
///
/// Dimension 0 is computed by single linkage: finite deaths are exactly the
/// minimum-spanning-forest edge lengths, and each connected component alive
/// at the threshold contributes one essential bar born at 0.
///
/// Dimension 1 uses the coboundary (anti-transpose) column reduction over
/// Z/2 restricted to positive edges: edges that do not merge components are
/// the only candidate cycle births, so the columns of merging edges are
/// cleared up front. Working columns hold triangle cofacets ordered by
/// filtration position; the pivot is the earliest cofacet. A column that
/// reduces to zero is a loop that never fills within the threshold and
/// yields an essential bar. Zero-persistence pairs are discarded.
///
/// Reduced columns are never stored. Each finished column keeps only the
/// list of edges whose coboundaries sum to it, and is rematerialized into
/// the working heap on demand. Together with the emergent-pair shortcut
/// (the first same-diameter cofacet of an edge, when unclaimed, is already
/// the column's pivot) this keeps memory linear in the edge count even on
/// landmark clouds with millions of within-threshold edges.
inline PersistenceBarcode vr_barcode(const PointCloud& pc, const FiltrationParams& params = {}) {
    if (params.max_dim < 0 || params.max_dim > 1)
        fail(errc::invalid_config, "max_dim must be 0 or 1");
    if (!(params.threshold > 0.0)) fail(errc::invalid_config, "threshold must be positive");
    const std::size_t n = pc.points.size();
    if (n == 0) fail(errc::empty_cloud, "point cloud has no landmarks");
    if (n >= (1u << 21)) fail(errc::cloud_too_large, "more than 2^21 points");

    PersistenceBarcode barcode;
    barcode.threshold = params.threshold;
    const double thr2 = params.threshold * params.threshold;

    // Edges within the threshold, via a row-sorted sweep.
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return pc.points[a] < pc.points[b];
    });
    std::vector<detail::RipsEdge> edges;
    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::int32_t i = order[oi];
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            const std::int32_t j = order[oj];
            const double row_gap = pc.points[j].row - pc.points[i].row;
            if (row_gap > params.threshold) break; // rows sorted ascending
            const std::int64_t d2 = detail::sq_dist(pc.points[i], pc.points[j]);
            if (static_cast<double>(d2) <= thr2)
                edges.push_back({d2, std::min(i, j), std::max(i, j)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const detail::RipsEdge& a, const detail::RipsEdge& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    // Dimension 0: single linkage.
    detail::UnionFind uf(n);
    std::vector<detail::RipsEdge> positive;
    for (const auto& e : edges) {
        if (uf.unite(e.u, e.v)) {
            barcode.dim0.push_back({0.0, std::sqrt(static_cast<double>(e.d2)), false});
        } else if (params.max_dim >= 1) {
            positive.push_back(e);
        }
    }
    std::size_t components = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (uf.find(static_cast<std::int32_t>(i)) == static_cast<std::int32_t>(i)) ++components;
    for (std::size_t i = 0; i < components; ++i)
        barcode.dim0.push_back({0.0, params.threshold, true});

    if (params.max_dim >= 1 && !positive.empty()) {
        // Neighbor lists sorted by vertex index, for cofacet enumeration.
        std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> adj(n);
        for (const auto& e : edges) {
            adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.d2);
            adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.d2);
        }
        for (auto& lst : adj) std::sort(lst.begin(), lst.end());

        const auto pack = [](std::int32_t a, std::int32_t b, std::int32_t c) {
            return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) |
                   static_cast<std::uint64_t>(c);
        };

        // Visit the cofacets of an edge in ascending common-neighbor order,
        // which for the packed triple is ascending key order as well.
        const auto for_each_cofacet = [&](const detail::RipsEdge& e, auto&& visit) {
            const auto& nu = adj[static_cast<std::size_t>(e.u)];
            const auto& nv = adj[static_cast<std::size_t>(e.v)];
            std::size_t i = 0, j = 0;
            while (i < nu.size() && j < nv.size()) {
                if (nu[i].first < nv[j].first) {
                    ++i;
                } else if (nu[i].first > nv[j].first) {
                    ++j;
                } else {
                    const std::int32_t w = nu[i].first;
                    const std::int64_t d2 = std::max({e.d2, nu[i].second, nv[j].second});
                    if (static_cast<double>(d2) <= thr2) {
                        std::int32_t a = e.u, b = e.v, c = w;
                        if (c < a) std::swap(a, c);
                        if (c < b) std::swap(b, c);
                        if (b < a) std::swap(a, b);
                        if (!visit(detail::ColEntry{d2, pack(a, b, c)})) return;
                    }
                    ++i;
                    ++j;
                }
            }
        };

        // Per-pivot storage: the edges whose coboundaries sum to the reduced
        // column, as (offset, length) into one shared arena.
        std::unordered_map<std::uint64_t, std::uint32_t> pivot_owner;
        pivot_owner.reserve(positive.size() * 2);
        std::vector<std::uint32_t> arena;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> stored; // offset, length

        const auto store_column = [&](std::vector<std::uint32_t> v) {
            // canonicalize mod 2: edges added an even number of times cancel
            std::sort(v.begin(), v.end());
            std::size_t w = 0;
            for (std::size_t r = 0; r < v.size();) {
                std::size_t r2 = r;
                while (r2 < v.size() && v[r2] == v[r]) ++r2;
                if ((r2 - r) % 2 == 1) v[w++] = v[r];
                r = r2;
            }
            v.resize(w);
            const std::uint32_t offset = static_cast<std::uint32_t>(arena.size());
            arena.insert(arena.end(), v.begin(), v.end());
            stored.emplace_back(offset, static_cast<std::uint32_t>(v.size()));
            return static_cast<std::uint32_t>(stored.size() - 1);
        };

        detail::WorkingColumn column;
        std::vector<std::uint32_t> v_edges; // additions forming the current column

        for (std::size_t idx = positive.size(); idx-- > 0;) {
            const auto& e = positive[idx];
            column = detail::WorkingColumn{};
            v_edges.clear();
            v_edges.push_back(static_cast<std::uint32_t>(idx));

            // Assemble the coboundary. The first cofacet sharing the edge's
            // diameter is the smallest entry the raw column can have; if no
            // earlier column claimed it, it is this column's pivot and the
            // pair has zero persistence, so nothing else is needed.
            bool emergent = false;
            bool check_emergent = true;
            for_each_cofacet(e, [&](const detail::ColEntry& cof) {
                if (check_emergent && cof.d2 == e.d2) {
                    if (pivot_owner.find(cof.key) == pivot_owner.end()) {
                        pivot_owner.emplace(cof.key, store_column(v_edges));
                        emergent = true;
                        return false; // stop enumerating
                    }
                    check_emergent = false;
                }
                column.push(cof);
                return true;
            });
            if (emergent) continue;

            for (;;) {
                const auto pivot = column.pop_pivot();
                if (!pivot) {
                    barcode.dim1.push_back(
                        {std::sqrt(static_cast<double>(e.d2)), params.threshold, true});
                    break;
                }
                const auto owner = pivot_owner.find(pivot->key);
                if (owner == pivot_owner.end()) {
                    if (pivot->d2 > e.d2) {
                        barcode.dim1.push_back({std::sqrt(static_cast<double>(e.d2)),
                                                std::sqrt(static_cast<double>(pivot->d2)), false});
                    }
                    pivot_owner.emplace(pivot->key, store_column(v_edges));
                    break;
                }
                // add the owning column: re-emit the coboundary of each edge
                // recorded for it; the popped pivot must go back first so it
                // can cancel against the owner's copy
                column.push(*pivot);
                const auto [offset, length] = stored[owner->second];
                for (std::uint32_t k = 0; k < length; ++k) {
                    const std::uint32_t f_idx = arena[offset + k];
                    v_edges.push_back(f_idx);
                    for_each_cofacet(positive[f_idx], [&](const detail::ColEntry& cof) {
                        column.push(cof);
                        return true;
                    });
                }
            }
        }
    }

    detail::sort_bars(barcode.dim0);
    detail::sort_bars(barcode.dim1);
    return barcode;
}

} // namespace mad
