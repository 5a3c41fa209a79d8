#include "qmatch/graph.hpp"

#include "qmatch/error.hpp"
#include "qmatch/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

namespace qmatch {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw InputError("vertex count must be non-negative");
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") references a vertex outside 0.." + std::to_string(n - 1));
        if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw InputError("edge weight must be positive and finite");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v)
            throw InputError("duplicate edge (" + std::to_string(edges[k].u) + "," +
                             std::to_string(edges[k].v) + ")");
    }
    edges_ = std::move(edges);
    incident_.assign(static_cast<std::size_t>(n_), {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        incident_[edges_[k].u].push_back(k);
        incident_[edges_[k].v].push_back(k);
    }
}

std::optional<std::size_t> Graph::find_edge(Vertex a, Vertex b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                               [](const Edge& e, const std::pair<int, int>& key) {
                                   return e.u != key.first ? e.u < key.first : e.v < key.second;
                               });
    if (it != edges_.end() && it->u == a && it->v == b)
        return static_cast<std::size_t>(it - edges_.begin());
    return std::nullopt;
}

Graph Graph::relabeled(std::span<const int> perm) const {
    if (perm.size() != static_cast<std::size_t>(n_))
        throw InputError("permutation size does not match vertex count");
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back({perm[e.u], perm[e.v], e.w});
    return Graph(n_, std::move(out));
}

double total_weight(const Graph& g) {
    double sum = 0.0;
    for (const auto& e : g.edges()) sum += e.w;
    return sum;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

} // namespace

Graph parse_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::optional<int> header_n;
    int max_vertex = -1;
    std::size_t line_no = 0;
    std::vector<std::pair<int, int>> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok[0] == "n") {
            if (tok.size() != 2) parse_fail(line_no, "header must be 'n <count>'");
            int count = 0;
            auto [p, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), count);
            if (ec != std::errc{} || p != tok[1].data() + tok[1].size() || count < 1)
                parse_fail(line_no, "invalid vertex count '" + tok[1] + "'");
            header_n = count;
            continue;
        }
        if (tok.size() != 3) parse_fail(line_no, "expected 'u v w', got '" + line + "'");
        int u = 0, v = 0;
        for (int i = 0; i < 2; ++i) {
            int& dst = i == 0 ? u : v;
            auto [p, ec] = std::from_chars(tok[i].data(), tok[i].data() + tok[i].size(), dst);
            if (ec != std::errc{} || p != tok[i].data() + tok[i].size() || dst < 0)
                parse_fail(line_no, "invalid vertex index '" + tok[i] + "'");
        }
        double w = 0.0;
        try {
            std::size_t used = 0;
            w = std::stod(tok[2], &used);
            if (used != tok[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            parse_fail(line_no, "invalid weight '" + tok[2] + "'");
        }
        if (header_n && std::max(u, v) >= *header_n)
            parse_fail(line_no, "vertex " + std::to_string(std::max(u, v)) +
                                    " exceeds header count " + std::to_string(*header_n));
        if (u == v) parse_fail(line_no, "self-loop on vertex " + std::to_string(u));
        if (!(w > 0.0) || !std::isfinite(w)) parse_fail(line_no, "weight must be positive");
        std::pair key{std::min(u, v), std::max(u, v)};
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            parse_fail(line_no, "duplicate edge (" + std::to_string(key.first) + "," +
                                    std::to_string(key.second) + ")");
        seen.push_back(key);
        max_vertex = std::max({max_vertex, u, v});
        edges.push_back({u, v, w});
    }
    int n = header_n.value_or(max_vertex + 1);
    if (n < 1) throw InputError("graph has no vertices");
    if (max_vertex >= n)
        throw InputError("vertex " + std::to_string(max_vertex) + " exceeds header count " +
                         std::to_string(n));
    return Graph(n, std::move(edges));
}

std::string serialize_edge_list(const Graph& g) {
    std::string out = "n " + std::to_string(g.num_vertices()) + "\n";
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.u, e.v, e.w);
        out += buf;
    }
    return out;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return parse_edge_list(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

GraphKind parse_graph_kind(std::string_view s) {
    if (s == "path") return GraphKind::Path;
    if (s == "cycle") return GraphKind::Cycle;
    if (s == "complete") return GraphKind::Complete;
    if (s == "star") return GraphKind::Star;
    if (s == "random") return GraphKind::Random;
    throw InputError("unknown graph kind '" + std::string(s) + "'");
}

WeightMode parse_weight_mode(std::string_view s) {
    if (s == "unit") return WeightMode::Unit;
    if (s == "uniform") return WeightMode::Uniform;
    throw InputError("unknown weight mode '" + std::string(s) + "'");
}

std::string to_string(GraphKind k) {
    switch (k) {
    case GraphKind::Path: return "path";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Complete: return "complete";
    case GraphKind::Star: return "star";
    case GraphKind::Random: return "random";
    }
    return "?";
}

std::string to_string(WeightMode m) { return m == WeightMode::Unit ? "unit" : "uniform"; }

Graph generate(const GeneratorSpec& spec) {
    const int n = spec.n;
    if (n < 2) throw InputError("generator requires n >= 2");
    if (spec.kind == GraphKind::Cycle && n < 3) throw InputError("cycle requires n >= 3");
    Rng rng(spec.seed);
    Rng weight_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    auto weight = [&] {
        return spec.weights == WeightMode::Unit ? 1.0 : 1.0 - weight_rng.uniform();
    };
    std::vector<Edge> edges;
    switch (spec.kind) {
    case GraphKind::Path:
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight()});
        break;
    case GraphKind::Cycle:
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight()});
        edges.push_back({0, n - 1, weight()});
        break;
    case GraphKind::Complete:
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight()});
        break;
    case GraphKind::Star:
        for (int j = 1; j < n; ++j) edges.push_back({0, j, weight()});
        break;
    case GraphKind::Random: {
        double p = spec.edge_probability;
        if (!(p > 0.0 && p <= 1.0)) throw InputError("edge probability must lie in (0, 1]");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform() < p) edges.push_back({i, j, weight()});
        break;
    }
    }
    return Graph(n, std::move(edges));
}

bool is_bipartite(const Graph& g) {
    const int n = g.num_vertices();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    for (int s = 0; s < n; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int a = q.front();
            q.pop();
            for (auto k : g.incident(a)) {
                const auto& e = g.edge(k);
                int b = e.u == a ? e.v : e.u;
                if (color[b] < 0) {
                    color[b] = 1 - color[a];
                    q.push(b);
                } else if (color[b] == color[a]) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace qmatch
