#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nettomo/graph.hpp"
#include "nettomo/spectral.hpp"
#include "nettomo/sysid.hpp"

namespace nettomo {

// Partitions of s into m parts in [min_part, max_part]. `lower_bounds` apply
// to some of the parts without saying which (the parts form a multiset).
struct PartitionProblem {
    int s = 0;
    int m = 0;
    int max_part = 0;
    int min_part = 1;
    std::vector<int> lower_bounds;
};

using PairSet = std::set<Edge>;  // normalized u < v

struct ConstructionProblem {
    DegreeSequence target;
    PairSet forced;
    PairSet forbidden;
};

struct Candidate {
    Graph graph;
    double residual = 0.0;
    bool matched = false;
};

struct SieveCounters {
    long long partitions_examined = 0;
    long long sequences_graphical = 0;
    long long graphs_constructed = 0;
    long long graphs_after_dedup = 0;
    long long matched = 0;
    double search_space_ratio = 0.0;  // 2^{n(n-1)/2} / graphs_constructed
};

struct SieveReport {
    std::vector<std::vector<int>> partitions_found;  // non-decreasing
    std::vector<DegreeSequence> graphical_sequences;
    std::vector<Candidate> candidates;  // canonical order
    SieveCounters counters;
    bool capacity_exceeded = false;
    std::vector<std::string> warnings;

    std::vector<Graph> matched() const;
};

struct SieveOptions {
    double spectral_tol = 1e-4;
    long long max_graphs = 1'000'000;
};

inline constexpr int kMaxDedupInterior = 10;

// The lexicographic successor step on a non-decreasing tuple summing to s:
// find the rightmost d_i with d_m - d_i >= 2, set d_i..d_{m-1} to d_i + 1 and
// put the remainder in d_m. Returns false once no such d_i exists.
bool next_partition(std::vector<int>& d);

// All multisets in increasing lexicographic order; bounds are enforced while
// generating, lower bounds as a filter. Infeasible problems give an empty list.
std::vector<std::vector<int>> restricted_partitions(const PartitionProblem& p);

// True when the multiset can be assigned to the bounded positions:
// k-th largest part >= k-th largest bound for every k.
bool satisfies_lower_bounds(const std::vector<int>& parts, const std::vector<int>& bounds);

// Brute force over ordered tuples in [1, max_part]^m.
long long partition_count_oracle(int s, int m, int max_part);

// Havel-Hakimi. Entries outside [0, size-1] make the sequence non-graphical.
bool is_graphical(const DegreeSequence& d);
bool is_graphical(std::vector<int> degrees);

// Binds each partition to the non-boundary vertices. Pure interior vertices
// take parts in non-increasing label order; vertices with a lower bound take
// every distinct assignment that respects it. Non-graphical results are dropped.
std::vector<ConstructionProblem> assemble_sequences(const SieveInput& in,
                                                    const std::vector<std::vector<int>>& partitions);

// Every labeled simple graph with the target degrees that contains `forced`
// and avoids `forbidden`, each exactly once. Throws CapacityError past max_graphs.
std::vector<Graph> construct_graphs(const ConstructionProblem& cp, long long max_graphs = 1'000'000);

// Appending form; the cap counts everything in `out`, and graphs found before
// a CapacityError stay there.
void construct_graphs_into(const ConstructionProblem& cp, long long max_graphs, std::vector<Graph>& out);

// Least relabeling (by sorted edge list) over permutations of the vertices
// outside `fixed`.
Graph canonical_form(const Graph& g, const std::vector<Vertex>& fixed);

// One representative per class of isomorphisms that fix `fixed` pointwise,
// sorted. Throws CapacityError with more than 10 free vertices.
std::vector<Graph> dedup_candidates(const std::vector<Graph>& graphs, const std::vector<Vertex>& fixed);

// Max-norm distance between sorted spectra.
double spectral_residual(const Graph& g, const Spectrum& target);

SieveReport spectral_filter(const std::vector<Graph>& candidates, const Spectrum& target, double tol);

// Partition, graphicality, construction and spectral matching.
SieveReport run_sieve(const SieveInput& in, const Spectrum& target, const SieveOptions& opts = {});

}  // namespace nettomo
