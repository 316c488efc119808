#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "nettomo/errors.hpp"
#include "nettomo/pipeline.hpp"
#include "nettomo/sieve.hpp"
#include "test_util.hpp"

using namespace nettomo;

namespace {

using Parts = std::vector<std::vector<int>>;

Graph g_star() { return read_graph_file(testutil::fixture("g_star.json")); }

SieveInput example_input() {
    SieveInput in;
    in.n = 6;
    in.boundary_nodes = {0, 1, 2};
    in.boundary_degrees = {3, 4, 3};
    in.known_pairs = {{0, 1, true}, {0, 2, false}, {1, 2, true}};
    in.total_degree = 22;
    in.s = 12;
    in.port_nodes = {0, 1, 2};
    return in;
}

std::string edge_lists(const std::vector<Graph>& gs) {
    std::string s;
    for (const auto& g : gs) s += "[" + graph_to_edge_list(g) + "] ";
    return s;
}

bool respects(const Graph& g, const ConstructionProblem& cp) {
    if (g.degrees() != cp.target.degrees) return false;
    for (auto [u, v] : cp.forced)
        if (!g.has_edge(u, v)) return false;
    for (auto [u, v] : cp.forbidden)
        if (g.has_edge(u, v)) return false;
    return true;
}

// Non-decreasing tuples by direct nested enumeration, as an ordered reference.
Parts all_tuples(int s, int m, int lo, int hi) {
    Parts out;
    std::vector<int> d;
    std::function<void(int, int)> rec = [&](int floor, int left) {
        if (static_cast<int>(d.size()) == m) {
            if (left == 0) out.push_back(d);
            return;
        }
        for (int x = floor; x <= hi && x <= left; ++x) {
            d.push_back(x);
            rec(x, left - x);
            d.pop_back();
        }
    };
    rec(lo, s);
    return out;
}

}  // namespace

TEST(Partitions, ExampleThreeParts) {
    const auto p = restricted_partitions({12, 3, 5, 1, {}});
    EXPECT_EQ(p, (Parts{{2, 5, 5}, {3, 4, 5}, {4, 4, 4}}));
}

TEST(Partitions, SuccessorStep) {
    std::vector<int> d{1, 1, 3, 3, 4};
    ASSERT_TRUE(next_partition(d));
    EXPECT_EQ(d, (std::vector<int>{1, 2, 2, 2, 5}));
}

TEST(Partitions, SuccessorWalkEnumeratesUnboundedPartitions) {
    // Starting from {1,...,1,s-m+1}, repeated successors visit every partition of s into m parts.
    for (int s = 1; s <= 16; ++s) {
        for (int m = 1; m <= s; ++m) {
            std::vector<int> d(static_cast<std::size_t>(m), 1);
            d.back() = s - m + 1;
            Parts walk{d};
            while (next_partition(d)) walk.push_back(d);
            EXPECT_EQ(walk, restricted_partitions({s, m, s, 1, {}})) << s << "," << m;
        }
    }
}

TEST(Partitions, TrivialAndInfeasible) {
    EXPECT_EQ(restricted_partitions({3, 3, 5, 1, {}}), (Parts{{1, 1, 1}}));
    EXPECT_TRUE(restricted_partitions({2, 3, 5, 1, {}}).empty());
    EXPECT_TRUE(restricted_partitions({20, 3, 5, 1, {}}).empty());
    EXPECT_EQ(restricted_partitions({0, 0, 5, 1, {}}), Parts(1));
    EXPECT_TRUE(restricted_partitions({1, 0, 5, 1, {}}).empty());
}

TEST(Partitions, LowerBoundsFilter) {
    const auto p = restricted_partitions({12, 3, 5, 1, {5, 5}});
    EXPECT_EQ(p, (Parts{{2, 5, 5}}));
    EXPECT_TRUE(satisfies_lower_bounds({2, 5, 5}, {5, 2}));
    EXPECT_FALSE(satisfies_lower_bounds({3, 4, 5}, {5, 5}));
    EXPECT_FALSE(satisfies_lower_bounds({3}, {1, 1}));
}

TEST(PartitionProperty, MatchesBruteForceAndOrderedReference) {
    for (int s = 0; s <= 20; ++s) {
        for (int m = 1; m <= 6; ++m) {
            for (int mx = 1; mx <= 8; ++mx) {
                const auto got = restricted_partitions({s, m, mx, 1, {}});
                EXPECT_EQ(static_cast<long long>(got.size()), partition_count_oracle(s, m, mx));
                EXPECT_EQ(got, all_tuples(s, m, 1, mx));
                EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
            }
        }
    }
}

TEST(PartitionOracle, SmallValues) {
    EXPECT_EQ(partition_count_oracle(12, 3, 5), 3);
    EXPECT_EQ(partition_count_oracle(7, 7, 6), 1);
    EXPECT_EQ(partition_count_oracle(5, 2, 4), 2);
    EXPECT_EQ(partition_count_oracle(0, 0, 3), 1);
}

TEST(Graphical, Examples) {
    EXPECT_FALSE(is_graphical(std::vector<int>{3, 2, 2, 2, 2}));
    EXPECT_TRUE(is_graphical(std::vector<int>{3, 4, 3, 5, 5, 2}));
    EXPECT_TRUE(is_graphical(std::vector<int>{3, 4, 3, 5, 4, 3}));
    EXPECT_TRUE(is_graphical(std::vector<int>{3, 4, 3, 4, 4, 4}));
    EXPECT_TRUE(is_graphical(std::vector<int>{0, 0, 0}));
    EXPECT_TRUE(is_graphical(std::vector<int>{}));
    EXPECT_TRUE(is_graphical(std::vector<int>{0}));
    EXPECT_FALSE(is_graphical(std::vector<int>{1}));
    EXPECT_FALSE(is_graphical(std::vector<int>{3, 1, 1}));
    EXPECT_FALSE(is_graphical(std::vector<int>{-1, 1}));
    EXPECT_TRUE(is_graphical(DegreeSequence{{1, 1}, true}));
}

TEST(GraphicalProperty, ErdosGallaiExhaustive) {
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> d(static_cast<std::size_t>(n), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == n) {
                const bool hh = is_graphical(d);
                EXPECT_EQ(hh, testutil::erdos_gallai(d));
                if (std::accumulate(d.begin(), d.end(), 0) % 2) EXPECT_FALSE(hh);
                return;
            }
            for (int x = 0; x <= n - 1; ++x) {
                d[static_cast<std::size_t>(pos)] = x;
                rec(pos + 1);
            }
        };
        rec(0);
    }
}

TEST(GraphicalProperty, ErdosGallaiRandomEight) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> deg(0, 7);
    int graphical = 0;
    for (int t = 0; t < 20000; ++t) {
        std::vector<int> d(8);
        for (auto& x : d) x = deg(rng);
        const bool hh = is_graphical(d);
        graphical += hh;
        EXPECT_EQ(hh, testutil::erdos_gallai(d));
    }
    EXPECT_GT(graphical, 100);
}

TEST(GraphicalProperty, RealDegreeSequencesAreGraphical) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) EXPECT_TRUE(is_graphical(testutil::random_graph(1 + t % 12, 0.4, rng).degrees()));
}

TEST(AssembleSequences, ExampleSequences) {
    const auto in = example_input();
    const auto problems = assemble_sequences(in, {{2, 5, 5}, {3, 4, 5}, {4, 4, 4}});
    ASSERT_EQ(problems.size(), 3u);
    EXPECT_EQ(problems[0].target.degrees, (std::vector<int>{3, 4, 3, 5, 5, 2}));
    EXPECT_EQ(problems[1].target.degrees, (std::vector<int>{3, 4, 3, 5, 4, 3}));
    EXPECT_EQ(problems[2].target.degrees, (std::vector<int>{3, 4, 3, 4, 4, 4}));
    EXPECT_EQ(problems[0].forced, (PairSet{{0, 1}, {1, 2}}));
    EXPECT_EQ(problems[0].forbidden, (PairSet{{0, 2}}));
}

TEST(AssembleSequences, NoInteriorNodes) {
    SieveInput in;
    in.n = 3;
    in.boundary_nodes = {0, 1, 2};
    in.boundary_degrees = {1, 2, 1};
    in.known_pairs = {{0, 1, true}, {0, 2, false}, {1, 2, true}};
    const auto problems = assemble_sequences(in, Parts(1));
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_EQ(problems[0].target.degrees, (std::vector<int>{1, 2, 1}));
}

TEST(AssembleSequences, LowerBoundsRestrictAssignments) {
    SieveInput in;
    in.n = 4;
    in.boundary_nodes = {0};
    in.boundary_degrees = {1};
    in.known_pairs = {{0, 1, true}};
    in.lower_bounds = {{1, 2}};
    in.port_nodes = {0, 1};
    // Parts for vertices 1..3 summing to 5.
    const auto problems = assemble_sequences(in, {{1, 1, 3}, {1, 2, 2}});
    std::set<std::vector<int>> seqs;
    for (const auto& p : problems) {
        EXPECT_GE(p.target.degrees[1], 2);
        seqs.insert(p.target.degrees);
    }
    // {1,1,3}: vertex 1 must take 3. {1,2,2}: vertex 1 takes 2, leaving {2,1}.
    EXPECT_EQ(seqs, (std::set<std::vector<int>>{{1, 3, 1, 1}, {1, 2, 2, 1}}));
    EXPECT_TRUE(assemble_sequences(in, {{1, 1, 1}}).empty());
}

TEST(AssembleSequences, DropsNonGraphicalAndOverForced) {
    auto in = example_input();
    // A part above n - 1 can never be realized.
    EXPECT_TRUE(assemble_sequences(in, {{1, 1, 10}}).empty());
    in.boundary_degrees = {3, 1, 3};
    EXPECT_TRUE(assemble_sequences(in, {{4, 4, 4}}).empty());
}

TEST(ConstructGraphs, Trivial) {
    const auto edge = construct_graphs({DegreeSequence{{1, 1}, true}, {}, {}});
    ASSERT_EQ(edge.size(), 1u);
    EXPECT_EQ(edge[0], path_graph(2));
    const auto tri = construct_graphs({DegreeSequence{{2, 2, 2}, true}, {}, {}});
    ASSERT_EQ(tri.size(), 1u);
    EXPECT_EQ(tri[0], complete_graph(3));
    EXPECT_EQ(construct_graphs({DegreeSequence{{0, 0, 0}, true}, {}, {}}).size(), 1u);
    EXPECT_TRUE(construct_graphs({DegreeSequence{{1, 1, 1}, true}, {}, {}}).empty());
}

TEST(ConstructGraphs, ForcedEdgesExceedingDegrees) {
    EXPECT_TRUE(construct_graphs({DegreeSequence{{1, 1, 0}, true}, {{0, 1}, {0, 2}}, {}}).empty());
    EXPECT_THROW(construct_graphs({DegreeSequence{{1, 1}, true}, {{0, 1}}, {{0, 1}}}), InvalidArgument);
}

TEST(ConstructGraphs, ExampleSequenceMatchesExhaustiveFilter) {
    const ConstructionProblem cp{DegreeSequence{{3, 4, 3, 4, 4, 4}, true}, {{0, 1}, {1, 2}}, {{0, 2}}};
    auto got = construct_graphs(cp);
    std::vector<Graph> expected;
    testutil::for_each_graph(6, [&](const Graph& g) {
        if (respects(g, cp)) expected.push_back(g);
    });
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.size(), 6u);
    EXPECT_EQ(dedup_candidates(got, {0, 1, 2}).size(), 1u);
}

TEST(ConstructGraphs, CapacityKeepsPartialResults) {
    const ConstructionProblem cp{DegreeSequence{{2, 2, 2, 2, 2, 2}, true}, {}, {}};
    std::vector<Graph> out;
    EXPECT_THROW(construct_graphs_into(cp, 5, out), CapacityError);
    EXPECT_EQ(out.size(), 5u);
    EXPECT_EQ(construct_graphs(cp).size(), 70u);  // labeled 2-regular graphs on 6 vertices
}

TEST(ConstructProperty, SoundAndCompleteUpToFiveVertices) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 5; ++n) {
        std::map<std::vector<int>, std::vector<Graph>> by_degrees;
        testutil::for_each_graph(n, [&](const Graph& g) { by_degrees[g.degrees()].push_back(g); });
        const auto pairs = testutil::all_pairs(n);
        for (const auto& [degrees, graphs] : by_degrees) {
            for (int trial = 0; trial < 15; ++trial) {
                ConstructionProblem cp{DegreeSequence{degrees, true}, {}, {}};
                const int constraints = pairs.empty() ? 0 : trial % 3;
                for (int c = 0; c < constraints; ++c) {
                    const auto e = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
                    if (cp.forced.count(e) || cp.forbidden.count(e)) continue;
                    (rng() % 2 ? cp.forced : cp.forbidden).insert(e);
                }
                auto got = construct_graphs(cp);
                for (const auto& g : got) EXPECT_TRUE(respects(g, cp));
                std::vector<Graph> expected;
                for (const auto& g : graphs)
                    if (respects(g, cp)) expected.push_back(g);
                std::sort(got.begin(), got.end());
                std::sort(expected.begin(), expected.end());
                EXPECT_TRUE(std::adjacent_find(got.begin(), got.end()) == got.end());
                EXPECT_EQ(got, expected) << edge_lists(got) << " vs " << edge_lists(expected);
            }
        }
    }
}

TEST(Dedup, InteriorRelabelingsCollapse) {
    Graph a(5, {{0, 1}, {1, 2}, {2, 3}});
    Graph b(5, {{0, 1}, {1, 2}, {2, 4}});
    Graph c(5, {{0, 1}, {0, 2}, {2, 3}});
    const auto out = dedup_candidates({a, b, c}, {0, 1});
    EXPECT_EQ(out.size(), 2u);
    EXPECT_EQ(dedup_candidates({a, b}, {0, 1, 2, 3, 4}).size(), 2u);
    EXPECT_EQ(canonical_form(a, {0, 1}), canonical_form(b, {0, 1}));
}

TEST(Dedup, TooManyFreeVertices) { EXPECT_THROW(dedup_candidates({Graph(12)}, {0}), CapacityError); }

TEST(SpectralFilter, GroundTruthMatches) {
    const Graph g = g_star();
    const auto rep = spectral_filter({g, complete_graph(6)}, spectrum(g), 1e-4);
    ASSERT_EQ(rep.candidates.size(), 2u);
    EXPECT_LT(rep.candidates[0].residual, 1e-6);
    EXPECT_TRUE(rep.candidates[0].matched);
    EXPECT_FALSE(rep.candidates[1].matched);
    EXPECT_EQ(rep.counters.matched, 1);
    EXPECT_TRUE(spectral_filter({}, spectrum(g), 1e-4).candidates.empty());
    EXPECT_THROW(spectral_residual(g, Spectrum{{0, 1}}), InvalidArgument);
}

TEST(RunSieve, ExampleFromBoundaryData) {
    const auto rep = run_sieve(example_input(), spectrum(g_star()));
    EXPECT_EQ(rep.partitions_found, (Parts{{2, 5, 5}, {3, 4, 5}, {4, 4, 4}}));
    EXPECT_EQ(rep.graphical_sequences.size(), 3u);
    EXPECT_EQ(rep.counters.graphs_constructed, 10);
    EXPECT_EQ(rep.counters.graphs_after_dedup, 5);
    const auto matched = rep.matched();
    ASSERT_EQ(matched.size(), 1u);
    EXPECT_EQ(canonical_form(matched[0], {0, 1, 2}), canonical_form(g_star(), {0, 1, 2}));
    EXPECT_LE(rep.counters.sequences_graphical, rep.counters.partitions_examined);
    EXPECT_LE(rep.counters.partitions_examined, partition_count_oracle(12, 3, 5));
    EXPECT_GT(rep.counters.search_space_ratio, 1.0);
}

TEST(RunSieve, FullPortsGiveSingleCandidate) {
    const Graph g = g_star();
    std::vector<Vertex> all{0, 1, 2, 3, 4, 5};
    const auto res = run_pipeline(g, all, all);
    EXPECT_EQ(res.sieve_input.s, 0);
    ASSERT_EQ(res.report.candidates.size(), 1u);
    EXPECT_EQ(res.report.candidates[0].graph, g);
    EXPECT_TRUE(res.report.candidates[0].matched);
}

TEST(RunSieve, OddTotalDegreeGivesEmptyReport) {
    auto in = example_input();
    in.total_degree = 23;
    in.s = 13;
    const auto rep = run_sieve(in, spectrum(g_star()));
    EXPECT_TRUE(rep.candidates.empty());
    EXPECT_FALSE(rep.warnings.empty());
}

TEST(RunSieve, CapacityFlagged) {
    SieveOptions opts;
    opts.max_graphs = 3;
    const auto rep = run_sieve(example_input(), spectrum(g_star()), opts);
    EXPECT_TRUE(rep.capacity_exceeded);
    EXPECT_EQ(rep.counters.graphs_constructed, 3);
}

TEST(PipelineProperty, GroundTruthAlwaysMatched) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 6;
        const Graph g = testutil::random_connected(n, 0.4, rng);
        std::vector<Vertex> ports;
        for (;;) {
            std::vector<Vertex> v(static_cast<std::size_t>(n));
            std::iota(v.begin(), v.end(), 0);
            std::shuffle(v.begin(), v.end(), rng);
            v.resize(static_cast<std::size_t>(std::uniform_int_distribution<int>((n + 1) / 2, n)(rng)));
            std::sort(v.begin(), v.end());
            if (pbh_check(g, v).controllable) {
                ports = v;
                break;
            }
        }
        const auto res = run_pipeline(g, ports, ports);
        ASSERT_FALSE(res.report.capacity_exceeded);
        const Graph want = canonical_form(g, ports);
        bool found = false;
        for (const auto& m : res.report.matched()) found |= m == want;
        EXPECT_TRUE(found) << graph_to_edge_list(g);
        for (const auto& c : res.report.candidates) {
            for (const auto& p : res.sieve_input.known_pairs) EXPECT_EQ(c.graph.has_edge(p.u, p.v), p.present);
        }
    }
}
