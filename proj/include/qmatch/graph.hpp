#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmatch {

using Vertex = int;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double w = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected simple graph on vertices 0..n-1.
///
/// Edges are stored with u < v and sorted lexicographically by (u, v). Every
/// index-based API in the library (matchings, angles, moments) refers to
/// positions in this canonical order. Immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Canonicalizes orientation and order. Throws InputError on self-loops,
    /// duplicate pairs, non-positive or non-finite weights, or out-of-range ids.
    Graph(int n, std::vector<Edge> edges);

    int num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(std::size_t k) const { return edges_[k]; }

    /// Canonical index of edge {a, b}, if present.
    std::optional<std::size_t> find_edge(Vertex a, Vertex b) const;

    /// Edge indices incident to v, ascending.
    std::span<const std::size_t> incident(Vertex v) const { return incident_[v]; }

    /// Same vertex set with the vertices renamed by perm (new id of old vertex i is perm[i]).
    Graph relabeled(std::span<const int> perm) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
};

/// W_G: sum of edge weights, accumulated in canonical edge order.
double total_weight(const Graph& g);

/// Parses "u v w" lines ('#' comments, optional "n <count>" header).
Graph parse_edge_list(std::string_view text);

/// Emits the edge-list format with an "n" header and 17 significant digits.
std::string serialize_edge_list(const Graph& g);

Graph read_graph_file(const std::string& path);

enum class GraphKind { Path, Cycle, Complete, Star, Random };
enum class WeightMode { Unit, Uniform };

GraphKind parse_graph_kind(std::string_view s);
WeightMode parse_weight_mode(std::string_view s);
std::string to_string(GraphKind k);
std::string to_string(WeightMode m);

struct GeneratorSpec {
    GraphKind kind = GraphKind::Path;
    int n = 2;
    std::uint64_t seed = 0;
    WeightMode weights = WeightMode::Unit;
    double edge_probability = 0.5;  // random only
};

/// Deterministic generator: identical specs give bitwise-identical graphs.
Graph generate(const GeneratorSpec& spec);

/// True when the graph is 2-colorable.
bool is_bipartite(const Graph& g);

} // namespace qmatch
