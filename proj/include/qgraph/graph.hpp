#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgraph/potential.hpp"

namespace qgraph {

// Declarative description of a metric graph with unit edge lengths.
// Edge endpoints refer to vertex ids; every edge may carry a potential.
struct GraphSpec {
    struct EdgeSpec {
        std::string id;
        std::string from;
        std::string to;
        EdgePotential potential{};
    };
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
};

// A bouquet of r cycles with lengths n_1, ..., n_r glued at one vertex.
struct BouquetShape {
    std::vector<int> cycle_lengths;

    int cycle_count() const { return static_cast<int>(cycle_lengths.size()); }

    int vertex_count() const {
        int v = 1;
        for (int n : cycle_lengths) v += n - 1;
        return v;
    }

    int edge_count() const {
        int e = 0;
        for (int n : cycle_lengths) e += n;
        return e;
    }
};

// Connected multigraph with named vertices and edges. Loops and parallel
// edges are allowed; edge order is the construction order and is frozen.
class MetricGraph {
public:
    struct Edge {
        std::string id;
        int tail;   // "from" vertex index
        int head;   // "to" vertex index
    };

    MetricGraph(std::vector<std::string> vertex_ids, std::vector<Edge> edges)
        : vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
        if (vertex_ids_.empty())
            throw std::invalid_argument("graph needs at least one vertex");
        for (int v = 0; v < static_cast<int>(vertex_ids_.size()); ++v)
            if (!vertex_lookup_.emplace(vertex_ids_[v], v).second)
                throw std::invalid_argument("duplicate vertex id: " + vertex_ids_[v]);
        for (int j = 0; j < static_cast<int>(edges_.size()); ++j) {
            const Edge& e = edges_[j];
            if (e.tail < 0 || e.tail >= vertex_count() || e.head < 0 || e.head >= vertex_count())
                throw std::invalid_argument("dangling endpoint on edge: " + e.id);
            if (!edge_lookup_.emplace(e.id, j).second)
                throw std::invalid_argument("duplicate edge id: " + e.id);
        }
        if (!connected())
            throw std::invalid_argument("graph must be connected");
    }

    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int j) const { return edges_.at(j); }

    bool is_loop(int j) const { return edges_.at(j).tail == edges_.at(j).head; }

    int vertex_index(const std::string& id) const {
        auto it = vertex_lookup_.find(id);
        if (it == vertex_lookup_.end())
            throw std::invalid_argument("unknown vertex id: " + id);
        return it->second;
    }

    int edge_index(const std::string& id) const {
        auto it = edge_lookup_.find(id);
        if (it == edge_lookup_.end())
            throw std::invalid_argument("unknown edge id: " + id);
        return it->second;
    }

    int degree(int v) const {
        int d = 0;
        for (const Edge& e : edges_) {
            if (e.tail == v) ++d;
            if (e.head == v) ++d;   // loop contributes 2
        }
        return d;
    }

    // |E| - |V|; the cluster multiplicity in the large-eigenvalue regime.
    int excess_edges() const { return edge_count() - vertex_count(); }

private:
    bool connected() const {
        std::vector<char> seen(vertex_ids_.size(), 0);
        std::queue<int> bfs;
        bfs.push(0);
        seen[0] = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (const Edge& e : edges_) {
                int other = -1;
                if (e.tail == v) other = e.head;
                else if (e.head == v) other = e.tail;
                if (other >= 0 && !seen[other]) {
                    seen[other] = 1;
                    bfs.push(other);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }

    std::vector<std::string> vertex_ids_;
    std::vector<Edge> edges_;
    std::map<std::string, int> vertex_lookup_;
    std::map<std::string, int> edge_lookup_;
};

inline MetricGraph build_graph(const GraphSpec& spec) {
    std::map<std::string, int> index;
    for (int v = 0; v < static_cast<int>(spec.vertices.size()); ++v)
        if (!index.emplace(spec.vertices[v], v).second)
            throw std::invalid_argument("duplicate vertex id: " + spec.vertices[v]);
    std::vector<MetricGraph::Edge> edges;
    edges.reserve(spec.edges.size());
    for (const auto& e : spec.edges) {
        auto t = index.find(e.from);
        auto h = index.find(e.to);
        if (t == index.end() || h == index.end())
            throw std::invalid_argument("dangling endpoint on edge: " + e.id);
        edges.push_back({e.id, t->second, h->second});
    }
    return MetricGraph(spec.vertices, std::move(edges));
}

inline std::vector<EdgePotential> spec_potentials(const GraphSpec& spec) {
    std::vector<EdgePotential> pots;
    pots.reserve(spec.edges.size());
    for (const auto& e : spec.edges) pots.push_back(e.potential);
    return pots;
}

// Builds the bouquet graph: cycle j contributes edges e{j}_1 .. e{j}_{n_j}
// walking v0 -> v{j}_1 -> ... -> v{j}_{n_j-1} -> v0 (a single loop if n_j = 1).
inline MetricGraph build_bouquet(const BouquetShape& shape) {
    if (shape.cycle_lengths.empty())
        throw std::invalid_argument("bouquet needs at least one cycle");
    for (int n : shape.cycle_lengths)
        if (n < 1)
            throw std::invalid_argument("bouquet cycle lengths must be >= 1");
    std::vector<std::string> vertex_ids{"v0"};
    std::vector<MetricGraph::Edge> edges;
    for (int j = 0; j < shape.cycle_count(); ++j) {
        const int n = shape.cycle_lengths[j];
        const std::string cyc = std::to_string(j + 1);
        int prev = 0;
        for (int k = 1; k < n; ++k) {
            vertex_ids.push_back("v" + cyc + "_" + std::to_string(k));
            int cur = static_cast<int>(vertex_ids.size()) - 1;
            edges.push_back({"e" + cyc + "_" + std::to_string(k), prev, cur});
            prev = cur;
        }
        edges.push_back({"e" + cyc + "_" + std::to_string(n), prev, 0});
    }
    return MetricGraph(std::move(vertex_ids), std::move(edges));
}

// Edge indices of each bouquet cycle in build_bouquet() order.
inline std::vector<std::vector<int>> bouquet_edge_groups(const BouquetShape& shape) {
    std::vector<std::vector<int>> groups;
    int offset = 0;
    for (int n : shape.cycle_lengths) {
        std::vector<int> g(n);
        for (int k = 0; k < n; ++k) g[k] = offset + k;
        groups.push_back(std::move(g));
        offset += n;
    }
    return groups;
}

// Dense integer matrix in row-major order.
struct IntegerMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<long long> data;

    IntegerMatrix() = default;
    IntegerMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

    long long& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Unoriented vertex-edge incidence matrix. A loop puts 2 in its vertex row,
// any other edge puts 1 at both endpoints; every column sums to 2.
inline IntegerMatrix incidence_matrix(const MetricGraph& g) {
    IntegerMatrix m(g.vertex_count(), g.edge_count());
    for (int j = 0; j < g.edge_count(); ++j) {
        const auto& e = g.edge(j);
        m.at(e.tail, j) += 1;
        m.at(e.head, j) += 1;
    }
    return m;
}

enum class CycleParity { None, Odd, Even, Multiple };

// Per-component census of the spanning subgraph (V, S) for an edge subset S.
// Every graph vertex belongs to exactly one component; isolated vertices form
// their own (tree) components.
struct ComponentSummary {
    struct Component {
        int vertex_count = 0;
        int edge_count = 0;
        int cycle_count = 0;   // edge_count - vertex_count + 1
        CycleParity parity = CycleParity::None;
    };
    std::vector<Component> components;

    int component_count() const { return static_cast<int>(components.size()); }

    // Every component carries exactly one cycle.
    bool saturated() const {
        return std::all_of(components.begin(), components.end(),
                           [](const Component& c) { return c.cycle_count == 1; });
    }

    bool all_cycles_odd() const {
        return std::all_of(components.begin(), components.end(),
                           [](const Component& c) { return c.parity != CycleParity::Even; });
    }
};

inline ComponentSummary subgraph_components(const MetricGraph& g,
                                            const std::vector<int>& edge_subset) {
    std::vector<char> in_subset(g.edge_count(), 0);
    for (int j : edge_subset) {
        if (j < 0 || j >= g.edge_count())
            throw std::invalid_argument("unknown edge id in subset");
        in_subset[j] = 1;
    }

    const int V = g.vertex_count();
    std::vector<int> comp(V, -1);
    ComponentSummary summary;
    for (int start = 0; start < V; ++start) {
        if (comp[start] >= 0) continue;
        const int id = summary.component_count();
        std::queue<int> bfs;
        bfs.push(start);
        comp[start] = id;
        int nv = 0;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            ++nv;
            for (int j = 0; j < g.edge_count(); ++j) {
                if (!in_subset[j]) continue;
                const auto& e = g.edge(j);
                int other = -1;
                if (e.tail == v) other = e.head;
                else if (e.head == v) other = e.tail;
                if (other >= 0 && comp[other] < 0) {
                    comp[other] = id;
                    bfs.push(other);
                }
            }
        }
        ComponentSummary::Component c;
        c.vertex_count = nv;
        summary.components.push_back(c);
    }

    std::vector<char> has_loop(summary.component_count(), 0);
    for (int j = 0; j < g.edge_count(); ++j) {
        if (!in_subset[j]) continue;
        const auto& e = g.edge(j);
        ++summary.components[comp[e.tail]].edge_count;
        if (g.is_loop(j)) has_loop[comp[e.tail]] = 1;
    }

    // Bipartite test per component over the non-loop subset edges; a unicyclic
    // component is bipartite exactly when its cycle has even length.
    std::vector<int> color(V, -1);
    std::vector<char> bipartite(summary.component_count(), 1);
    for (int start = 0; start < V; ++start) {
        if (color[start] >= 0) continue;
        color[start] = 0;
        std::queue<int> bfs;
        bfs.push(start);
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int j = 0; j < g.edge_count(); ++j) {
                if (!in_subset[j] || g.is_loop(j)) continue;
                const auto& e = g.edge(j);
                int other = -1;
                if (e.tail == v) other = e.head;
                else if (e.head == v) other = e.tail;
                if (other < 0) continue;
                if (color[other] < 0) {
                    color[other] = 1 - color[v];
                    bfs.push(other);
                } else if (color[other] == color[v]) {
                    bipartite[comp[v]] = 0;
                }
            }
        }
    }

    for (int i = 0; i < summary.component_count(); ++i) {
        auto& c = summary.components[i];
        c.cycle_count = c.edge_count - c.vertex_count + 1;
        if (c.cycle_count == 0) c.parity = CycleParity::None;
        else if (c.cycle_count > 1) c.parity = CycleParity::Multiple;
        else if (has_loop[i]) c.parity = CycleParity::Odd;
        else c.parity = bipartite[i] ? CycleParity::Even : CycleParity::Odd;
    }
    return summary;
}

// Recognizes graphs that are bouquets of cycles: one common vertex, every
// other vertex of degree 2, each cycle returning to the common vertex.
struct DetectedBouquet {
    BouquetShape shape;
    std::vector<std::vector<int>> cycle_edges;   // edge indices walking each cycle
};

inline std::optional<DetectedBouquet> detect_bouquet(const MetricGraph& g) {
    if (g.edge_count() < 1) return std::nullopt;
    int center = -1;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.vertex_count() == 1 || g.degree(v) != 2) {
            if (center >= 0) return std::nullopt;
            center = v;
        }
    }
    if (center < 0) return std::nullopt;   // plain cycle: no distinguished vertex
    if (g.degree(center) != 2 * g.edge_count() - 2 * (g.vertex_count() - 1))
        return std::nullopt;

    std::vector<char> used(g.edge_count(), 0);
    DetectedBouquet result;
    for (int j0 = 0; j0 < g.edge_count(); ++j0) {
        if (used[j0]) continue;
        const auto& e0 = g.edge(j0);
        if (e0.tail != center && e0.head != center) return std::nullopt;
        std::vector<int> walk{j0};
        used[j0] = 1;
        int at = (e0.tail == center) ? e0.head : e0.tail;
        while (at != center) {
            int next = -1;
            for (int j = 0; j < g.edge_count(); ++j) {
                if (used[j]) continue;
                const auto& e = g.edge(j);
                if (e.tail == at || e.head == at) { next = j; break; }
            }
            if (next < 0) return std::nullopt;
            used[next] = 1;
            walk.push_back(next);
            const auto& e = g.edge(next);
            at = (e.tail == at) ? e.head : e.tail;
        }
        result.shape.cycle_lengths.push_back(static_cast<int>(walk.size()));
        result.cycle_edges.push_back(std::move(walk));
    }
    return result;
}

// Detects a plain single cycle (no distinguished vertex); reported as a
// one-cycle bouquet anchored at vertex 0.
inline std::optional<DetectedBouquet> detect_cycle_or_bouquet(const MetricGraph& g) {
    if (auto b = detect_bouquet(g)) return b;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) != 2) return std::nullopt;
    if (g.edge_count() != g.vertex_count()) return std::nullopt;
    std::vector<char> used(g.edge_count(), 0);
    std::vector<int> walk;
    int at = 0;
    do {
        int next = -1;
        for (int j = 0; j < g.edge_count(); ++j) {
            if (used[j]) continue;
            const auto& e = g.edge(j);
            if (e.tail == at || e.head == at) { next = j; break; }
        }
        if (next < 0) return std::nullopt;
        used[next] = 1;
        walk.push_back(next);
        const auto& e = g.edge(next);
        at = (e.tail == at) ? e.head : e.tail;
    } while (at != 0);
    if (static_cast<int>(walk.size()) != g.edge_count()) return std::nullopt;
    DetectedBouquet result;
    result.shape.cycle_lengths.push_back(static_cast<int>(walk.size()));
    result.cycle_edges.push_back(std::move(walk));
    return result;
}

}  // namespace qgraph
