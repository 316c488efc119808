#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nettomo/graph.hpp"

namespace nettomo {

// Zero-eigenvalue, distinctness and integer-rounding tolerance.
inline constexpr double kSpectralTol = 1e-6;

// Laplacian eigenvalues, non-decreasing.
struct Spectrum {
    std::vector<double> eigenvalues;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Monic coefficients [1, a1, ..., an] of s^n + a1 s^{n-1} + ... + an.
struct CharPoly {
    std::vector<double> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

struct SpectralReport {
    int n = 0;
    int edge_count = 0;
    double edge_rounding_residual = 0.0;
    double spanning_trees = 0.0;
    bool is_connected = false;
    bool is_tree = false;
    std::optional<long long> wiener_index;            // trees only
    std::optional<double> hoffman_number;             // all eigenvalues distinct
    std::optional<std::vector<double>> complement_poly;  // monic, all eigenvalues distinct
    bool star_by_simple_eigenvalue = false;  // tree whose positive spectrum has one simple eigenvalue
    bool star_by_three_eigenvalues = false;  // connected, three distinct eigenvalues, lambda_2 = 1
    std::optional<long long> diameter_bound;  // 2*kappa, integer spectra only
};

Eigen::MatrixXd laplacian(const Graph& g);

// Throws ComputationError if the eigensolver does not converge.
Spectrum spectrum(const Graph& g);
Spectrum spectrum_of_symmetric(const Eigen::MatrixXd& m);

// Coefficients of prod_i (s + lambda_i), i.e. det(sI + L).
CharPoly char_poly(const Spectrum& spec);
CharPoly poly_from_roots(std::vector<double> roots);  // prod_i (s - r_i)

// psi(x) = prod_{i>=2} (x - lambda_i): drops one zero eigenvalue.
std::vector<double> reduced_poly(const Spectrum& spec);

// Everything derivable from the spectrum alone. Fields whose hypotheses
// fail stay empty.
SpectralReport spectral_report(const Spectrum& spec, int n);

// Same report from a graph, with spectral connectivity checked against BFS
// (ConsistencyError on disagreement).
SpectralReport spectral_report(const Graph& g);

long long count_k_matchings(const Graph& g, int k);

// Deletion-contraction count of spanning trees. Refuses n > 12.
std::uint64_t spanning_tree_count_oracle(const Graph& g);

long long wiener_index(const Graph& g);  // -1 when disconnected

}  // namespace nettomo
