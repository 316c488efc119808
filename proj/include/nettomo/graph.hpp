#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace nettomo {

// Vertices are 0-based in the library. File formats and the CLI use 1-based labels.
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr int kMaxVertices = 64;

// Simple undirected graph on at most 64 vertices, stored as adjacency bitmasks.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<Edge>& edges);

    int order() const { return static_cast<int>(adj_.size()); }
    int size() const;  // edge count

    void add_edge(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);
    bool has_edge(Vertex u, Vertex v) const;
    int degree(Vertex v) const;
    std::uint64_t neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }

    // Edges with u < v, sorted lexicographically.
    std::vector<Edge> edges() const;
    std::vector<int> degrees() const;

    bool operator==(const Graph&) const = default;
    auto operator<=>(const Graph&) const = default;

private:
    void check_pair(Vertex u, Vertex v) const;
    std::vector<std::uint64_t> adj_;
};

// Degree list. `labeled` distinguishes a per-vertex assignment from an
// unlabeled multiset (as produced by partitioning).
struct DegreeSequence {
    std::vector<int> degrees;
    bool labeled = true;

    int sum() const;
    bool operator==(const DegreeSequence&) const = default;
};

bool is_connected(const Graph& g);
std::vector<std::vector<int>> distance_matrix(const Graph& g);  // -1 for unreachable
Graph complement(const Graph& g);
Graph subdivision(const Graph& g);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph star_graph(int n);  // K_{1,n-1} centred on vertex 0

// Graph files: JSON {"n": int, "edges": [[u,v],...]} (1-based), or text with a
// first line "n=<int>" followed by "u v" lines.
Graph parse_graph(const std::string& text);
Graph read_graph_file(const std::filesystem::path& path);
std::string graph_to_json_string(const Graph& g);
std::string graph_to_edge_list(const Graph& g);  // "1-2 1-5 ..." on one line

}  // namespace nettomo
