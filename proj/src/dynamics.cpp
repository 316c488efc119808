#include "nettomo/dynamics.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "nettomo/errors.hpp"
#include "nettomo/linalg.hpp"
#include "nettomo/random.hpp"
#include "nettomo/spectral.hpp"

namespace nettomo {

namespace {

void check_nodes(const std::vector<Vertex>& nodes, int n, const char* what) {
    if (nodes.empty()) throw InvalidArgument(std::string(what) + " node list is empty");
    std::set<Vertex> seen;
    for (Vertex v : nodes) {
        if (v < 0 || v >= n) {
            throw InvalidArgument(std::string(what) + " node " + std::to_string(v + 1) + " outside 1.." +
                                  std::to_string(n));
        }
        if (!seen.insert(v).second) {
            throw InvalidArgument(std::string(what) + " node " + std::to_string(v + 1) + " listed twice");
        }
    }
}

struct Eigenspace {
    double value;
    Eigen::MatrixXd basis;  // orthonormal columns
};

std::vector<Eigenspace> laplacian_eigenspaces(const Eigen::MatrixXd& l) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    if (es.info() != Eigen::Success) throw ComputationError("symmetric eigensolver did not converge");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    std::vector<Eigenspace> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= vals.size(); ++i) {
        if (i == vals.size() || vals(i) - vals(i - 1) > kSpectralTol) {
            out.push_back({vals(start), vecs.middleCols(start, i - start)});
            start = i;
        }
    }
    return out;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<Vertex>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

int absolute_rank(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    return static_cast<int>((s.array() > tol).count());
}

}  // namespace

SteeredSystem build_steered_system(const Graph& g, const std::vector<Vertex>& input_nodes,
                                   const std::vector<Vertex>& output_nodes) {
    const int n = g.order();
    check_nodes(input_nodes, n, "input");
    check_nodes(output_nodes, n, "output");
    SteeredSystem sys;
    sys.a = -laplacian(g);
    sys.b = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(input_nodes.size()));
    sys.c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(output_nodes.size()), n);
    for (std::size_t j = 0; j < input_nodes.size(); ++j) sys.b(input_nodes[j], static_cast<Eigen::Index>(j)) = 1.0;
    for (std::size_t i = 0; i < output_nodes.size(); ++i) sys.c(static_cast<Eigen::Index>(i), output_nodes[i]) = 1.0;
    sys.input_nodes = input_nodes;
    sys.output_nodes = output_nodes;
    return sys;
}

DiscreteSystem discretize(const SteeredSystem& sys, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("sampling period must be positive");
    const auto n = sys.a.rows();
    const auto r = sys.b.cols();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + r, n + r);
    aug.topLeftCorner(n, n) = sys.a * delta;
    aug.topRightCorner(n, r) = sys.b * delta;
    const Eigen::MatrixXd e = expm(aug);
    return DiscreteSystem{e.topLeftCorner(n, n), e.topRightCorner(n, r), sys.c, delta};
}

IoRecord simulate(const DiscreteSystem& dsys, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& x0) {
    if (inputs.cols() != dsys.b_d.cols()) {
        throw InvalidArgument("input width " + std::to_string(inputs.cols()) + " does not match " +
                              std::to_string(dsys.b_d.cols()) + " input channels");
    }
    if (x0.size() != dsys.a_d.rows()) throw InvalidArgument("initial state has the wrong dimension");
    IoRecord rec;
    rec.delta = dsys.delta;
    rec.inputs = inputs;
    rec.initial_state = x0;
    rec.outputs.resize(inputs.rows(), dsys.c_d.rows());
    Eigen::VectorXd z = x0;
    for (Eigen::Index k = 0; k < inputs.rows(); ++k) {
        rec.outputs.row(k) = (dsys.c_d * z).transpose();
        z = dsys.a_d * z + dsys.b_d * inputs.row(k).transpose();
    }
    return rec;
}

Eigen::MatrixXd impulse_input(int r_inputs, int channel, int horizon) {
    if (channel < 0 || channel >= r_inputs) throw InvalidArgument("impulse channel out of range");
    if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(horizon + 1, r_inputs);
    u(0, channel) = 1.0;
    return u;
}

PbhResult pbh_check(const Graph& g, const std::vector<Vertex>& nodes) {
    check_nodes(nodes, g.order(), "port");
    PbhResult res;
    for (const auto& space : laplacian_eigenspaces(laplacian(g))) {
        const auto restricted = select_rows(space.basis, nodes);
        if (absolute_rank(restricted, kPbhTol) < space.basis.cols()) {
            res.controllable = false;
            res.bad_eigenvalues.push_back(space.value);
        }
    }
    return res;
}

int minimal_order(const SteeredSystem& sys) {
    int order = 0;
    for (const auto& space : laplacian_eigenspaces(-sys.a)) {
        const Eigen::MatrixXd residue = (sys.c * space.basis) * (space.basis.transpose() * sys.b);
        order += absolute_rank(residue, kPbhTol);
    }
    return order;
}

bool controllable_from_some_node(const Graph& g) {
    for (Vertex v = 0; v < g.order(); ++v) {
        if (pbh_check(g, {v}).controllable) return true;
    }
    return false;
}

Graph random_connected_graph(int n, double p, std::mt19937_64& rng, long long& rejections,
                             long long max_rejections) {
    std::bernoulli_distribution coin(p);
    for (;;) {
        Graph g(n);
        for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u + 1; v < n; ++v) {
                if (coin(rng)) g.add_edge(u, v);
            }
        }
        if (is_connected(g)) return g;
        if (++rejections > max_rejections) {
            throw CapacityError("connectivity rejection sampling exceeded " + std::to_string(max_rejections) +
                                " rejections");
        }
    }
}

CensusResult controllability_census(int n, double edge_probability, int trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("census needs at least one trial");
    if (!(edge_probability > 0.0 && edge_probability < 1.0)) {
        throw InvalidArgument("edge probability must lie strictly between 0 and 1");
    }
    if (n < 1) throw InvalidArgument("census needs n >= 1");
    CensusResult res;
    res.n = n;
    res.trials = trials;
    const long long cap = 100LL * trials;
    for (int t = 0; t < trials; ++t) {
        auto rng = substream(seed, "census", (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(t));
        const Graph g = random_connected_graph(n, edge_probability, rng, res.rejections, cap);
        if (controllable_from_some_node(g)) ++res.controllable;
    }
    return res;
}

}  // namespace nettomo
