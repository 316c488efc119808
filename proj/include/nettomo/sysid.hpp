#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nettomo/dynamics.hpp"
#include "nettomo/spectral.hpp"

namespace nettomo {

// Impulse-response matrices M_1..M_H, each r_O x r_I.
struct MarkovSequence {
    std::vector<Eigen::MatrixXd> params;
    double delta = 0.0;

    int horizon() const { return static_cast<int>(params.size()); }
};

inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kMaxBoundaryResidual = 0.1;

// A realization similar to the sampled system. Only similarity invariants
// (spectrum, C A B, traces) are meaningful; the basis is whatever the SVD picked.
struct IdentifiedModel {
    int order = 0;
    double delta = 0.0;
    Eigen::MatrixXd a_d, b_d, c_d;
    Eigen::MatrixXd a_tilde, b_tilde, c_tilde;
    bool continuous = false;

    std::vector<double> hankel_singular_values;
    double markov_fit_error = 0.0;  // relative, over the supplied horizon
    std::vector<std::string> warnings;

    // Eigenvalues of -a_tilde: the Laplacian spectrum restricted to the
    // controllable and observable part (order entries, no padding).
    Spectrum spectrum_est;
    CharPoly char_poly_est;
    Eigen::MatrixXi boundary_block;  // round(c_tilde * a_tilde * b_tilde)
    double rounding_residual = 0.0;

    std::vector<Vertex> input_nodes;
    std::vector<Vertex> output_nodes;
};

struct KnownPair {
    Vertex u = 0;
    Vertex v = 0;
    bool present = false;

    bool operator==(const KnownPair&) const = default;
};

// Everything the sieve needs from identification.
struct SieveInput {
    int n = 0;
    std::vector<Vertex> boundary_nodes;  // in both port sets, ascending
    std::vector<int> boundary_degrees;
    std::vector<KnownPair> known_pairs;  // u < v, ascending
    int total_degree = 0;                // round(trace(-a_tilde))
    int s = 0;                           // total_degree - sum(boundary_degrees)
    std::vector<std::pair<Vertex, int>> lower_bounds;  // nodes in exactly one port set
    std::vector<Vertex> port_nodes;      // union of both port sets, ascending
};

// One impulse experiment per input channel, zero initial state.
MarkovSequence markov_from_impulses(const std::vector<IoRecord>& records);

// Ho-Kalman on the block-Hankel matrices built from M_1..M_H with H/2 block
// rows and columns. Requires H >= 2 * max_order.
IdentifiedModel hankel_realize(const MarkovSequence& m, int max_order, double rank_tol = kDefaultRankTol);

// Principal logarithm of the discrete state matrix; recovers b_tilde through
// the inverse of the integral of exp(a_tilde t). Fills spectrum, char poly and
// the rounded boundary block.
IdentifiedModel to_continuous(const IdentifiedModel& model, double delta);

// Reads degrees, known pairs, residual degree sum and lower bounds off the
// boundary block. Throws IdentificationError when the model is not full order
// or the block does not round cleanly to a Laplacian pattern.
SieveInput extract_boundary_block(const IdentifiedModel& model, int n);

}  // namespace nettomo
