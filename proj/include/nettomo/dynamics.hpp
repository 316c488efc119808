#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nettomo/graph.hpp"

namespace nettomo {

// Steered-and-observed consensus system: x' = -L x + B u, y = C x.
struct SteeredSystem {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;  // n x r_I, one unit entry per column
    Eigen::MatrixXd c;  // r_O x n, one unit entry per row
    std::vector<Vertex> input_nodes;
    std::vector<Vertex> output_nodes;

    int order() const { return static_cast<int>(a.rows()); }
};

// Zero-order-hold sampling of a SteeredSystem.
struct DiscreteSystem {
    Eigen::MatrixXd a_d;
    Eigen::MatrixXd b_d;
    Eigen::MatrixXd c_d;
    double delta = 0.0;
};

// Sampled trajectories. Row k of `inputs` is v(k) and row k of `outputs` is
// w(k) = C z(k), recorded before v(k) is applied, so both have K rows and the
// last input row has no observable effect.
struct IoRecord {
    double delta = 0.0;
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd outputs;
    Eigen::VectorXd initial_state;

    int length() const { return static_cast<int>(outputs.rows()); }
};

struct PbhResult {
    bool controllable = true;
    std::vector<double> bad_eigenvalues;  // one entry per failing eigenspace
};

struct CensusResult {
    int n = 0;
    int trials = 0;
    int controllable = 0;
    long long rejections = 0;

    double fraction() const { return trials ? static_cast<double>(controllable) / trials : 0.0; }
};

inline constexpr double kPbhTol = 1e-8;

inline double default_delta(int n) { return 1.0 / (2.0 * n); }

// Throws InvalidArgument for empty, out-of-range or duplicate node lists.
SteeredSystem build_steered_system(const Graph& g, const std::vector<Vertex>& input_nodes,
                                   const std::vector<Vertex>& output_nodes);

DiscreteSystem discretize(const SteeredSystem& sys, double delta);

IoRecord simulate(const DiscreteSystem& dsys, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& x0);

// (horizon + 1) x r_I input with a unit impulse on `channel` at k = 0.
Eigen::MatrixXd impulse_input(int r_inputs, int channel, int horizon);

// Eigenspace projection form of the PBH test: controllable iff, for every
// Laplacian eigenspace U, the rows of U at `nodes` have full column rank.
// By symmetry the same call decides observability from output nodes.
PbhResult pbh_check(const Graph& g, const std::vector<Vertex>& nodes);

// Dimension of the controllable and observable part: the sum over
// eigenspaces U of rank(C U U^T B).
int minimal_order(const SteeredSystem& sys);

bool controllable_from_some_node(const Graph& g);

// Erdos-Renyi G(n, p) conditioned on connectivity by rejection. Each call
// adds its rejected draws to `rejections` and throws CapacityError past the cap.
Graph random_connected_graph(int n, double p, std::mt19937_64& rng, long long& rejections,
                             long long max_rejections);

// Fraction of sampled connected graphs controllable from at least one single node.
CensusResult controllability_census(int n, double edge_probability, int trials, std::uint64_t seed);

}  // namespace nettomo
