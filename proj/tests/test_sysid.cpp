#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nettomo/errors.hpp"
#include "nettomo/pipeline.hpp"
#include "nettomo/spectral.hpp"
#include "nettomo/sysid.hpp"
#include "test_util.hpp"

using namespace nettomo;

namespace {

Graph g_star() { return read_graph_file(testutil::fixture("g_star.json")); }

std::vector<Vertex> first_k(int k) {
    std::vector<Vertex> v(static_cast<std::size_t>(k));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

MarkovSequence markov_of(const Graph& g, const std::vector<Vertex>& in, const std::vector<Vertex>& out,
                         double delta, int horizon) {
    const auto d = discretize(build_steered_system(g, in, out), delta);
    return markov_from_impulses(impulse_experiments(d, horizon));
}

IdentifiedModel identify_graph(const Graph& g, const std::vector<Vertex>& in, const std::vector<Vertex>& out) {
    const int n = g.order();
    const auto d = discretize(build_steered_system(g, in, out), default_delta(n));
    return identify(impulse_experiments(d, 2 * n), in, out, n);
}

// Controllable and observable from I = O: a random port set of at least half the nodes.
std::vector<Vertex> good_ports(const Graph& g, std::mt19937_64& rng) {
    const int n = g.order();
    for (;;) {
        auto v = first_k(n);
        std::shuffle(v.begin(), v.end(), rng);
        std::uniform_int_distribution<int> size((n + 1) / 2, n);
        v.resize(static_cast<std::size_t>(size(rng)));
        std::sort(v.begin(), v.end());
        if (pbh_check(g, v).controllable) return v;
    }
}

}  // namespace

TEST(MarkovFromImpulses, IsolatedVertex) {
    const auto m = markov_of(Graph(1), {0}, {0}, 1.0, 5);
    ASSERT_EQ(m.horizon(), 5);
    for (const auto& mk : m.params) EXPECT_NEAR(mk(0, 0), 1.0, 1e-15);
    const auto m2 = markov_of(Graph(1), {0}, {0}, 0.25, 3);
    for (const auto& mk : m2.params) EXPECT_NEAR(mk(0, 0), 0.25, 1e-15);
}

TEST(MarkovFromImpulses, SingleEdge) {
    const auto m = markov_of(path_graph(2), {0}, {0}, 1.0, 4);
    const double e = std::exp(-2.0);
    EXPECT_NEAR(m.params[0](0, 0), 0.5 + (1 - e) / 4, 1e-14);
    // M_2 = C A_d B_d
    EXPECT_NEAR(m.params[1](0, 0), 0.5 + e * (1 - e) / 4, 1e-14);
}

TEST(MarkovFromImpulses, AssemblesChannelsColumnwise) {
    const Graph g = cycle_graph(5);
    const auto d = discretize(build_steered_system(g, {0, 2}, {1, 3, 4}), 0.1);
    const auto m = markov_from_impulses(impulse_experiments(d, 6));
    Eigen::MatrixXd pow = Eigen::MatrixXd::Identity(5, 5);
    for (int k = 0; k < 6; ++k) {
        EXPECT_LT((m.params[static_cast<std::size_t>(k)] - d.c_d * pow * d.b_d).norm(), 1e-14);
        pow = d.a_d * pow;
    }
}

TEST(MarkovFromImpulses, RejectsNonImpulseRecords) {
    const auto d = discretize(build_steered_system(path_graph(3), {0}, {0}), 0.1);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    EXPECT_THROW(markov_from_impulses({simulate(d, Eigen::MatrixXd::Zero(6, 1), z)}), InvalidArgument);
    Eigen::MatrixXd twice = impulse_input(1, 0, 5);
    twice(2, 0) = 1.0;
    EXPECT_THROW(markov_from_impulses({simulate(d, twice, z)}), InvalidArgument);
    EXPECT_THROW(markov_from_impulses({simulate(d, impulse_input(1, 0, 5), Eigen::VectorXd::Ones(3))}),
                 InvalidArgument);
    EXPECT_THROW(markov_from_impulses({}), InvalidArgument);
}

TEST(MarkovFromImpulses, RejectsInconsistentRecords) {
    const Graph g = path_graph(3);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    const auto d1 = discretize(build_steered_system(g, {0, 1}, {0}), 0.1);
    const auto d2 = discretize(build_steered_system(g, {0, 1}, {0}), 0.2);
    EXPECT_THROW(markov_from_impulses({simulate(d1, impulse_input(2, 0, 5), z), simulate(d2, impulse_input(2, 1, 5), z)}),
                 InvalidArgument);
    EXPECT_THROW(markov_from_impulses({simulate(d1, impulse_input(2, 0, 5), z), simulate(d1, impulse_input(2, 1, 6), z)}),
                 InvalidArgument);
    EXPECT_THROW(markov_from_impulses({simulate(d1, impulse_input(2, 0, 5), z), simulate(d1, impulse_input(2, 0, 5), z)}),
                 InvalidArgument);
    EXPECT_THROW(markov_from_impulses({simulate(d1, impulse_input(2, 0, 5), z)}), InvalidArgument);
}

TEST(HankelRealize, ExampleConfigurationIsFullOrder) {
    const auto m = markov_of(g_star(), first_k(3), first_k(3), 1.0 / 12, 12);
    const auto model = hankel_realize(m, 6);
    EXPECT_EQ(model.order, 6);
    EXPECT_LT(model.markov_fit_error, 1e-6);
    EXPECT_TRUE(model.warnings.empty());
}

TEST(HankelRealize, StarFromCenterHasOrderTwo) {
    const auto m = markov_of(star_graph(6), {0}, {0}, 1.0 / 12, 12);
    const auto model = hankel_realize(m, 6);
    EXPECT_EQ(model.order, 2);
    EXPECT_EQ(model.order, minimal_order(build_steered_system(star_graph(6), {0}, {0})));
}

TEST(HankelRealize, ZeroSequenceGivesEmptyModel) {
    MarkovSequence m;
    m.delta = 0.1;
    m.params.assign(6, Eigen::MatrixXd::Zero(2, 2));
    const auto model = hankel_realize(m, 3);
    EXPECT_EQ(model.order, 0);
    EXPECT_EQ(model.a_d.size(), 0);
    const auto ct = to_continuous(model, 0.1);
    EXPECT_EQ(ct.order, 0);
    EXPECT_TRUE(ct.spectrum_est.eigenvalues.empty());
}

TEST(HankelRealize, RejectsShortHorizon) {
    const auto m = markov_of(path_graph(4), {0}, {0}, 0.1, 5);
    EXPECT_THROW(hankel_realize(m, 3), InvalidArgument);
    EXPECT_NO_THROW(hankel_realize(m, 2));
}

TEST(HankelRealize, TruncationWarns) {
    const auto m = markov_of(path_graph(4), {0}, {0}, 0.5, 8);
    const auto model = hankel_realize(m, 2);
    EXPECT_EQ(model.order, 2);
    EXPECT_FALSE(model.warnings.empty());
}

TEST(HankelRealize, FlagsRankAmbiguity) {
    // Two modes of comparable Hankel energy with the cutoff placed between them.
    MarkovSequence m;
    m.delta = 1.0;
    for (int k = 0; k < 6; ++k) {
        Eigen::MatrixXd mk(1, 1);
        mk << std::pow(0.9, k) + 0.3 * std::pow(-0.9, k);
        m.params.push_back(mk);
    }
    const auto model = hankel_realize(m, 3, 0.5);
    ASSERT_GE(model.hankel_singular_values.size(), 2u);
    ASSERT_LT(model.hankel_singular_values[0] / model.hankel_singular_values[1], 10.0);
    EXPECT_EQ(model.order, 1);
    bool flagged = false;
    for (const auto& w : model.warnings) flagged |= w.find("ambiguity") != std::string::npos;
    EXPECT_TRUE(flagged);
}

TEST(ToContinuous, IdentityIsZeroGenerator) {
    IdentifiedModel m;
    m.order = 3;
    m.a_d = Eigen::MatrixXd::Identity(3, 3);
    m.b_d = Eigen::MatrixXd::Identity(3, 1);
    m.c_d = Eigen::MatrixXd::Identity(1, 3);
    const auto ct = to_continuous(m, 0.5);
    EXPECT_LT(ct.a_tilde.norm(), 1e-15);
    EXPECT_NEAR(ct.b_tilde(0, 0), 2.0, 1e-14);
}

TEST(ToContinuous, Scalar) {
    IdentifiedModel m;
    m.order = 1;
    const double delta = 0.1;
    m.a_d = Eigen::MatrixXd::Constant(1, 1, std::exp(-2 * delta));
    m.b_d = Eigen::MatrixXd::Constant(1, 1, (1 - std::exp(-2 * delta)) / 2);
    m.c_d = Eigen::MatrixXd::Ones(1, 1);
    const auto ct = to_continuous(m, delta);
    EXPECT_NEAR(ct.a_tilde(0, 0), -2.0, 1e-13);
    EXPECT_NEAR(ct.b_tilde(0, 0), 1.0, 1e-13);
    EXPECT_NEAR(ct.spectrum_est.eigenvalues[0], 2.0, 1e-13);
}

TEST(ToContinuous, RejectsNonPositiveEigenvalue) {
    IdentifiedModel m;
    m.order = 2;
    m.a_d = Eigen::Vector2d(0.5, -0.1).asDiagonal();
    m.b_d = Eigen::MatrixXd::Ones(2, 1);
    m.c_d = Eigen::MatrixXd::Ones(1, 2);
    EXPECT_THROW(to_continuous(m, 0.1), IdentificationError);
}

TEST(ToContinuous, ExampleSpectrumMatchesGraph) {
    const auto model = identify_graph(g_star(), first_k(3), first_k(3));
    const auto truth = spectrum(g_star()).eigenvalues;
    ASSERT_EQ(model.spectrum_est.eigenvalues.size(), truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) EXPECT_NEAR(model.spectrum_est.eigenvalues[i], truth[i], 1e-6);
}

TEST(ExtractBoundaryBlock, ExampleModel) {
    const auto model = identify_graph(g_star(), first_k(3), first_k(3));
    Eigen::MatrixXi expected(3, 3);
    expected << -3, 1, 0, 1, -4, 1, 0, 1, -3;
    EXPECT_EQ(model.boundary_block, expected);
    EXPECT_LT(model.rounding_residual, 1e-6);
    const auto in = extract_boundary_block(model, 6);
    EXPECT_EQ(in.boundary_nodes, first_k(3));
    EXPECT_EQ(in.boundary_degrees, (std::vector<int>{3, 4, 3}));
    EXPECT_EQ(in.known_pairs, (std::vector<KnownPair>{{0, 1, true}, {0, 2, false}, {1, 2, true}}));
    EXPECT_EQ(in.total_degree, 22);
    EXPECT_EQ(in.s, 12);
    EXPECT_TRUE(in.lower_bounds.empty());
}

TEST(ExtractBoundaryBlock, AllNodesPorted) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + t % 6;
        const Graph g = testutil::random_connected(n, 0.5, rng);
        const auto model = identify_graph(g, first_k(n), first_k(n));
        EXPECT_EQ(model.boundary_block, (-laplacian(g)).cast<int>());
        EXPECT_EQ(extract_boundary_block(model, n).s, 0);
    }
}

TEST(ExtractBoundaryBlock, LowerBoundsForOneSidedPorts) {
    // Path 1-2-3-4 with I = {1,2,3}, O = {1,2,4}: node 3 is input-only, node 4 output-only.
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto model = identify_graph(g, {0, 1, 2}, {0, 1, 3});
    const auto in = extract_boundary_block(model, 4);
    EXPECT_EQ(in.boundary_nodes, (std::vector<Vertex>{0, 1}));
    EXPECT_EQ(in.boundary_degrees, (std::vector<int>{1, 2}));
    EXPECT_EQ(in.port_nodes, (std::vector<Vertex>{0, 1, 2, 3}));
    // Pairs seen: {1,2} present, {1,3} absent, {2,3} present, {1,4} absent, {2,4} absent, {3,4} present.
    ASSERT_EQ(in.lower_bounds.size(), 2u);
    EXPECT_EQ(in.lower_bounds[0], (std::pair<Vertex, int>{2, 2}));
    EXPECT_EQ(in.lower_bounds[1], (std::pair<Vertex, int>{3, 1}));
    EXPECT_EQ(in.s, 6 - 3);
}

TEST(ExtractBoundaryBlock, RejectsDeficientOrder) {
    const auto model = identify_graph(star_graph(6), {0}, {0});
    EXPECT_EQ(model.order, 2);
    EXPECT_THROW(extract_boundary_block(model, 6), IdentificationError);
}

TEST(ExtractBoundaryBlock, RejectsPoorRounding) {
    auto model = identify_graph(g_star(), first_k(3), first_k(3));
    model.rounding_residual = 0.2;
    EXPECT_THROW(extract_boundary_block(model, 6), IdentificationError);
}

TEST(ExtractBoundaryBlock, RejectsMalformedEntries) {
    auto model = identify_graph(g_star(), first_k(3), first_k(3));
    auto bad = model;
    bad.boundary_block(0, 1) = 2;
    EXPECT_THROW(extract_boundary_block(bad, 6), IdentificationError);
    bad = model;
    bad.boundary_block(0, 1) = 0;
    EXPECT_THROW(extract_boundary_block(bad, 6), IdentificationError);
    bad = model;
    bad.boundary_block(1, 1) = 1;
    EXPECT_THROW(extract_boundary_block(bad, 6), IdentificationError);
}

TEST(SysidProperty, RoundTripRecoversSpectrum) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 7;
        const Graph g = testutil::random_connected(n, 0.4, rng);
        const auto ports = good_ports(g, rng);
        const auto model = identify_graph(g, ports, ports);
        ASSERT_EQ(model.order, n) << graph_to_edge_list(g);
        const auto truth = spectrum(g);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(model.spectrum_est.eigenvalues[i], truth.eigenvalues[i], 1e-6);
        const auto c_true = char_poly(truth).coefficients;
        const auto& c_est = model.char_poly_est.coefficients;
        for (int i = 1; i < n; ++i) EXPECT_LT(std::abs(c_est[i] - c_true[i]), 1e-6 * c_true[i]) << i;
        EXPECT_NEAR(model.a_tilde.trace(), -2.0 * g.size(), 1e-6);
        EXPECT_LT(model.rounding_residual, 1e-6);
        const auto in = extract_boundary_block(model, n);
        EXPECT_EQ((in.s + std::accumulate(in.boundary_degrees.begin(), in.boundary_degrees.end(), 0)) % 2, 0);
    }
}

TEST(SysidProperty, UncontrollableConfigurationsGiveMinimalOrder) {
    std::vector<std::pair<Graph, std::vector<Vertex>>> cases;
    for (int n = 3; n <= 7; ++n) {
        cases.push_back({star_graph(n), {0}});
        if (n >= 4) {
            cases.push_back({star_graph(n), {1}});
        } else {
            cases.push_back({path_graph(n), {1}});
        }
        cases.push_back({complete_graph(n), {0}});
        cases.push_back({cycle_graph(n), {0}});
    }
    ASSERT_EQ(cases.size(), 20u);
    for (const auto& [g, ports] : cases) {
        const auto sys = build_steered_system(g, ports, ports);
        const int q = minimal_order(sys);
        ASSERT_LT(q, g.order());
        const auto model = identify_graph(g, ports, ports);
        EXPECT_EQ(model.order, q) << graph_to_edge_list(g);
    }
}
