#include "nettomo/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "nettomo/errors.hpp"

namespace nettomo {

Graph::Graph(int n) {
    if (n < 1 || n > kMaxVertices) {
        throw InvalidArgument("graph order must be in 1.." + std::to_string(kMaxVertices) +
                              ", got " + std::to_string(n));
    }
    adj_.assign(static_cast<std::size_t>(n), 0);
}

Graph::Graph(int n, const std::vector<Edge>& edges) : Graph(n) {
    for (auto [u, v] : edges) {
        check_pair(u, v);
        if (has_edge(u, v)) {
            throw InvalidArgument("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
        }
        add_edge(u, v);
    }
}

void Graph::check_pair(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= order() || v >= order()) {
        throw InvalidArgument("vertex out of range in pair {" + std::to_string(u) + "," +
                              std::to_string(v) + "}");
    }
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
}

int Graph::size() const {
    int twice = 0;
    for (auto row : adj_) twice += std::popcount(row);
    return twice / 2;
}

void Graph::add_edge(Vertex u, Vertex v) {
    check_pair(u, v);
    adj_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
    adj_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
}

void Graph::remove_edge(Vertex u, Vertex v) {
    check_pair(u, v);
    adj_[static_cast<std::size_t>(u)] &= ~(std::uint64_t{1} << v);
    adj_[static_cast<std::size_t>(v)] &= ~(std::uint64_t{1} << u);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= order() || v >= order() || u == v) return false;
    return (adj_[static_cast<std::size_t>(u)] >> v) & 1U;
}

int Graph::degree(Vertex v) const { return std::popcount(adj_.at(static_cast<std::size_t>(v))); }

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < order(); ++u) {
        for (Vertex v = u + 1; v < order(); ++v) {
            if (has_edge(u, v)) out.emplace_back(u, v);
        }
    }
    return out;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> d(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) d[i] = std::popcount(adj_[i]);
    return d;
}

int DegreeSequence::sum() const { return std::accumulate(degrees.begin(), degrees.end(), 0); }

std::vector<std::vector<int>> distance_matrix(const Graph& g) {
    const int n = g.order();
    std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (Vertex s = 0; s < n; ++s) {
        auto& row = dist[static_cast<std::size_t>(s)];
        std::queue<Vertex> q;
        row[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex v = 0; v < n; ++v) {
                if (g.has_edge(u, v) && row[static_cast<std::size_t>(v)] < 0) {
                    row[static_cast<std::size_t>(v)] = row[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
            }
        }
    }
    return dist;
}

bool is_connected(const Graph& g) {
    const int n = g.order();
    if (n == 0) return true;
    std::uint64_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint64_t next = 0;
        for (Vertex v = 0; v < n; ++v) {
            if ((frontier >> v) & 1U) next |= g.neighbors(v);
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return std::popcount(seen) == n;
}

Graph complement(const Graph& g) {
    Graph c(g.order());
    for (Vertex u = 0; u < g.order(); ++u) {
        for (Vertex v = u + 1; v < g.order(); ++v) {
            if (!g.has_edge(u, v)) c.add_edge(u, v);
        }
    }
    return c;
}

Graph subdivision(const Graph& g) {
    const auto es = g.edges();
    Graph s(g.order() + static_cast<int>(es.size()));
    int mid = g.order();
    for (auto [u, v] : es) {
        s.add_edge(u, mid);
        s.add_edge(mid, v);
        ++mid;
    }
    return s;
}

Graph path_graph(int n) {
    Graph g(n);
    for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) throw InvalidArgument("cycle needs at least 3 vertices");
    Graph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

Graph complete_graph(int n) { return complement(Graph(n)); }

Graph star_graph(int n) {
    Graph g(n);
    for (Vertex v = 1; v < n; ++v) g.add_edge(0, v);
    return g;
}

namespace {

Graph from_one_based(int n, const std::vector<std::pair<long long, long long>>& raw) {
    std::vector<Edge> es;
    es.reserve(raw.size());
    for (auto [u, v] : raw) {
        if (u < 1 || v < 1 || u > n || v > n) {
            throw InvalidArgument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                  "} outside 1.." + std::to_string(n));
        }
        es.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
    }
    return Graph(n, es);
}

Graph parse_json_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("malformed graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
        throw InvalidArgument("graph JSON needs integer field \"n\"");
    }
    const int n = j["n"].get<int>();
    std::vector<std::pair<long long, long long>> raw;
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
                throw InvalidArgument("each edge must be a pair of integers");
            }
            raw.emplace_back(e[0].get<long long>(), e[1].get<long long>());
        }
    }
    return from_one_based(n, raw);
}

Graph parse_text_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<long long, long long>> raw;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (n < 0) {
            auto eq = line.find('=');
            if (line.compare(first, 1, "n") != 0 || eq == std::string::npos) {
                throw InvalidArgument("edge-list text must start with \"n=<int>\"");
            }
            try {
                n = std::stoi(line.substr(eq + 1));
            } catch (const std::exception&) {
                throw InvalidArgument("bad vertex count line: " + line);
            }
            continue;
        }
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u >> v)) throw InvalidArgument("bad edge line: " + line);
        raw.emplace_back(u, v);
    }
    if (n < 0) throw InvalidArgument("empty graph text");
    return from_one_based(n, raw);
}

}  // namespace

Graph parse_graph(const std::string& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json_graph(text);
    return parse_text_graph(text);
}

Graph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read graph file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string graph_to_json_string(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.order();
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : g.edges()) j["edges"].push_back({u + 1, v + 1});
    return j.dump();
}

std::string graph_to_edge_list(const Graph& g) {
    std::string out;
    for (auto [u, v] : g.edges()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(u + 1) + "-" + std::to_string(v + 1);
    }
    return out;
}

}  // namespace nettomo
