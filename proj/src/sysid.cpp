#include "nettomo/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nettomo/errors.hpp"
#include "nettomo/linalg.hpp"

namespace nettomo {

namespace {

constexpr double kImpulseTol = 1e-12;

// Index of the single unit entry in v(0), or -1.
int impulse_channel(const IoRecord& rec) {
    if (rec.inputs.rows() == 0) return -1;
    int channel = -1;
    for (Eigen::Index j = 0; j < rec.inputs.cols(); ++j) {
        const double x = rec.inputs(0, j);
        if (std::abs(x - 1.0) <= kImpulseTol) {
            if (channel >= 0) return -1;
            channel = static_cast<int>(j);
        } else if (std::abs(x) > kImpulseTol) {
            return -1;
        }
    }
    if (rec.inputs.rows() > 1 && rec.inputs.bottomRows(rec.inputs.rows() - 1).cwiseAbs().maxCoeff() > kImpulseTol) {
        return -1;
    }
    return channel;
}

Eigen::MatrixXd block_hankel(const MarkovSequence& m, int blocks, int shift) {
    const auto ro = m.params.front().rows();
    const auto ri = m.params.front().cols();
    Eigen::MatrixXd h(blocks * ro, blocks * ri);
    for (int i = 0; i < blocks; ++i) {
        for (int j = 0; j < blocks; ++j) {
            h.block(i * ro, j * ri, ro, ri) = m.params[static_cast<std::size_t>(i + j + shift)];
        }
    }
    return h;
}

}  // namespace

MarkovSequence markov_from_impulses(const std::vector<IoRecord>& records) {
    if (records.empty()) throw InvalidArgument("no impulse records supplied");
    const auto r_in = records.front().inputs.cols();
    const auto r_out = records.front().outputs.cols();
    const int length = records.front().length();
    const double delta = records.front().delta;
    if (static_cast<std::size_t>(r_in) != records.size()) {
        throw InvalidArgument("need one impulse record per input channel: " + std::to_string(r_in) +
                              " channels, " + std::to_string(records.size()) + " records");
    }
    if (length < 2) throw InvalidArgument("impulse records need at least two samples");

    MarkovSequence seq;
    seq.delta = delta;
    seq.params.assign(static_cast<std::size_t>(length - 1), Eigen::MatrixXd::Zero(r_out, r_in));
    std::set<int> seen;
    for (const auto& rec : records) {
        if (rec.delta != delta) throw InvalidArgument("impulse records disagree on the sampling period");
        if (rec.length() != length || rec.inputs.rows() != length) {
            throw InvalidArgument("impulse records disagree on the horizon");
        }
        if (rec.inputs.cols() != r_in || rec.outputs.cols() != r_out) {
            throw InvalidArgument("impulse records disagree on port counts");
        }
        const int ch = impulse_channel(rec);
        if (ch < 0) throw InvalidArgument("record is not a unit-impulse experiment");
        if (!seen.insert(ch).second) throw InvalidArgument("two records excite the same channel");
        if (rec.initial_state.size() && rec.initial_state.cwiseAbs().maxCoeff() > 0.0) {
            throw InvalidArgument("impulse experiments must start from the zero state");
        }
        for (int k = 1; k < length; ++k) {
            seq.params[static_cast<std::size_t>(k - 1)].col(ch) = rec.outputs.row(k).transpose();
        }
    }
    return seq;
}

IdentifiedModel hankel_realize(const MarkovSequence& m, int max_order, double rank_tol) {
    if (max_order < 0) throw InvalidArgument("max_order must be non-negative");
    if (!(rank_tol > 0.0)) throw InvalidArgument("rank tolerance must be positive");
    if (m.params.empty() || m.horizon() < 2 * std::max(max_order, 1)) {
        throw InvalidArgument("horizon " + std::to_string(m.horizon()) + " too short for order " +
                              std::to_string(max_order) + " (need at least twice the order)");
    }
    const auto ro = m.params.front().rows();
    const auto ri = m.params.front().cols();
    const int blocks = m.horizon() / 2;

    IdentifiedModel model;
    model.delta = m.delta;
    const Eigen::MatrixXd h0 = block_hankel(m, blocks, 0);
    const Eigen::MatrixXd h1 = block_hankel(m, blocks, 1);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    model.hankel_singular_values.assign(sv.data(), sv.data() + sv.size());

    int q = 0;
    if (sv.size() && sv(0) > 0.0) {
        while (q < sv.size() && sv(q) > rank_tol * sv(0)) ++q;
    }
    if (q > max_order) {
        model.warnings.push_back("numerical rank " + std::to_string(q) + " exceeds max order " +
                                 std::to_string(max_order) + "; truncated");
        q = max_order;
    }
    if (q > 0 && q < sv.size() && sv(q) > 0.0 && sv(q - 1) / sv(q) < 10.0) {
        model.warnings.push_back("rank ambiguity: singular value gap below 10x at order " + std::to_string(q));
    }
    model.order = q;
    if (q == 0) {
        model.a_d.resize(0, 0);
        model.b_d.resize(0, ri);
        model.c_d.resize(ro, 0);
        return model;
    }

    const Eigen::MatrixXd u = svd.matrixU().leftCols(q);
    const Eigen::MatrixXd v = svd.matrixV().leftCols(q);
    const Eigen::ArrayXd root = sv.head(q).array().sqrt();
    const Eigen::MatrixXd obs = u * root.matrix().asDiagonal();
    const Eigen::MatrixXd ctr = root.matrix().asDiagonal() * v.transpose();
    const Eigen::VectorXd inv_root = root.inverse().matrix();

    model.a_d = inv_root.asDiagonal() * (u.transpose() * h1 * v) * inv_root.asDiagonal();
    model.b_d = ctr.leftCols(ri);
    model.c_d = obs.topRows(ro);

    double scale = 0.0, err = 0.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(q, q);
    for (const auto& mk : m.params) {
        scale = std::max(scale, mk.cwiseAbs().maxCoeff());
        err = std::max(err, (model.c_d * power * model.b_d - mk).cwiseAbs().maxCoeff());
        power = model.a_d * power;
    }
    model.markov_fit_error = scale > 0.0 ? err / scale : err;
    if (model.markov_fit_error > 1e-6) {
        model.warnings.push_back("realization reproduces the Markov parameters only to relative error " +
                                 std::to_string(model.markov_fit_error));
    }
    return model;
}

IdentifiedModel to_continuous(const IdentifiedModel& model, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("sampling period must be positive");
    IdentifiedModel out = model;
    out.delta = delta;
    out.continuous = true;
    const int q = model.order;
    if (q == 0) {
        out.a_tilde.resize(0, 0);
        out.b_tilde = model.b_d;
        out.c_tilde = model.c_d;
        out.spectrum_est = Spectrum{};
        out.char_poly_est = CharPoly{{1.0}};
        out.boundary_block = Eigen::MatrixXi::Zero(model.c_d.rows(), model.b_d.cols());
        out.rounding_residual = 0.0;
        return out;
    }

    out.a_tilde = logm(model.a_d) / delta;
    const Eigen::MatrixXd phi = expm_integral(out.a_tilde, delta);
    out.b_tilde = phi.partialPivLu().solve(model.b_d);
    out.c_tilde = model.c_d;

    Eigen::EigenSolver<Eigen::MatrixXd> es(out.a_tilde, false);
    if (es.info() != Eigen::Success) throw ComputationError("eigensolver did not converge on the identified model");
    std::vector<double> lam;
    double max_imag = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        lam.push_back(-es.eigenvalues()(i).real());
        max_imag = std::max(max_imag, std::abs(es.eigenvalues()(i).imag()));
    }
    if (max_imag > kSpectralTol) {
        out.warnings.push_back("identified state matrix has complex eigenvalues (max imaginary part " +
                               std::to_string(max_imag) + ")");
    }
    std::sort(lam.begin(), lam.end());
    out.spectrum_est = Spectrum{lam};
    out.char_poly_est = char_poly(out.spectrum_est);

    const Eigen::MatrixXd cab = out.c_tilde * out.a_tilde * out.b_tilde;
    out.boundary_block = cab.array().round().cast<int>().matrix();
    out.rounding_residual = (cab - out.boundary_block.cast<double>()).cwiseAbs().maxCoeff();
    return out;
}

SieveInput extract_boundary_block(const IdentifiedModel& model, int n) {
    if (!model.continuous) throw InvalidArgument("model has no continuous-time realization yet");
    if (model.input_nodes.empty() || model.output_nodes.empty()) {
        throw InvalidArgument("model carries no port node lists");
    }
    if (model.order < n) {
        throw IdentificationError("identified order " + std::to_string(model.order) + " is below n = " +
                                  std::to_string(n) + "; the ports do not see every mode");
    }
    if (model.order > n) {
        throw IdentificationError("identified order " + std::to_string(model.order) + " exceeds n = " +
                                  std::to_string(n));
    }
    if (model.rounding_residual > kMaxBoundaryResidual) {
        throw IdentificationError("boundary block rounds with residual " + std::to_string(model.rounding_residual));
    }
    const auto& blk = model.boundary_block;
    if (blk.rows() != static_cast<Eigen::Index>(model.output_nodes.size()) ||
        blk.cols() != static_cast<Eigen::Index>(model.input_nodes.size())) {
        throw InvalidArgument("boundary block shape does not match the port lists");
    }

    SieveInput in;
    in.n = n;
    std::map<std::pair<Vertex, Vertex>, bool> pairs;
    std::map<Vertex, int> degree_of;
    for (Eigen::Index i = 0; i < blk.rows(); ++i) {
        const Vertex o = model.output_nodes[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < blk.cols(); ++j) {
            const Vertex v = model.input_nodes[static_cast<std::size_t>(j)];
            const int entry = blk(i, j);
            if (o == v) {
                if (entry > 0 || -entry > n - 1) {
                    throw IdentificationError("diagonal boundary entry " + std::to_string(entry) +
                                              " is not a negated degree");
                }
                degree_of[o] = -entry;
                continue;
            }
            if (entry != 0 && entry != 1) {
                throw IdentificationError("off-diagonal boundary entry " + std::to_string(entry) +
                                          " is not 0 or 1");
            }
            const auto key = std::minmax(o, v);
            auto [it, fresh] = pairs.emplace(key, entry == 1);
            if (!fresh && it->second != (entry == 1)) {
                throw IdentificationError("boundary block is not symmetric on a shared pair");
            }
        }
    }
    for (auto [v, d] : degree_of) {
        in.boundary_nodes.push_back(v);
        in.boundary_degrees.push_back(d);
    }
    for (auto [key, present] : pairs) in.known_pairs.push_back({key.first, key.second, present});

    std::set<Vertex> ins(model.input_nodes.begin(), model.input_nodes.end());
    std::set<Vertex> outs(model.output_nodes.begin(), model.output_nodes.end());
    std::set<Vertex> ports = ins;
    ports.insert(outs.begin(), outs.end());
    in.port_nodes.assign(ports.begin(), ports.end());
    for (Vertex v : ports) {
        if (ins.count(v) && outs.count(v)) continue;
        int known = 0;
        for (const auto& p : in.known_pairs) known += p.present && (p.u == v || p.v == v);
        in.lower_bounds.emplace_back(v, known);
    }

    in.total_degree = static_cast<int>(std::lround(-model.a_tilde.trace()));
    int rd = 0;
    for (int d : in.boundary_degrees) rd += d;
    in.s = in.total_degree - rd;
    if (in.s < 0) {
        throw IdentificationError("boundary degrees exceed the total degree read from the trace");
    }
    return in;
}

}  // namespace nettomo
