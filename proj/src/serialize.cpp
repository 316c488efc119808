#include "nettomo/serialize.hpp"

#include "nettomo/errors.hpp"

namespace nettomo {

namespace {

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) throw InvalidArgument("matrix has the wrong row count");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidArgument("matrix has the wrong column count");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

Json nodes_to_json(const std::vector<Vertex>& nodes) {
    Json a = Json::array();
    for (Vertex v : nodes) a.push_back(v + 1);
    return a;
}

std::vector<Vertex> nodes_from_json(const Json& j) {
    std::vector<Vertex> out;
    for (const auto& v : j) out.push_back(v.get<int>() - 1);
    return out;
}

Json graph_json(const Graph& g) {
    Json j;
    j["n"] = g.order();
    j["edges"] = Json::array();
    for (auto [u, v] : g.edges()) j["edges"].push_back({u + 1, v + 1});
    return j;
}

}  // namespace

Json model_to_json(const IdentifiedModel& model, int n) {
    Json j;
    j["n"] = n;
    j["order"] = model.order;
    j["delta"] = model.delta;
    j["inputs"] = nodes_to_json(model.input_nodes);
    j["outputs"] = nodes_to_json(model.output_nodes);
    j["a_tilde_d"] = matrix_to_json(model.a_d);
    j["b_tilde_d"] = matrix_to_json(model.b_d);
    j["c_tilde_d"] = matrix_to_json(model.c_d);
    j["a_tilde"] = matrix_to_json(model.a_tilde);
    j["b_tilde"] = matrix_to_json(model.b_tilde);
    j["c_tilde"] = matrix_to_json(model.c_tilde);
    j["hankel_singular_values"] = model.hankel_singular_values;
    j["markov_fit_error"] = model.markov_fit_error;
    j["spectrum"] = model.spectrum_est.eigenvalues;
    j["char_poly"] = model.char_poly_est.coefficients;
    Json blk = Json::array();
    for (Eigen::Index i = 0; i < model.boundary_block.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < model.boundary_block.cols(); ++c) row.push_back(model.boundary_block(i, c));
        blk.push_back(std::move(row));
    }
    j["boundary_block"] = std::move(blk);
    j["rounding_residual"] = model.rounding_residual;
    j["warnings"] = model.warnings;
    return j;
}

IdentifiedModel model_from_json(const Json& j, int* n) {
    IdentifiedModel m;
    try {
        if (n) *n = j.at("n").get<int>();
        m.order = j.at("order").get<int>();
        m.delta = j.at("delta").get<double>();
        m.input_nodes = nodes_from_json(j.at("inputs"));
        m.output_nodes = nodes_from_json(j.at("outputs"));
        const auto q = static_cast<Eigen::Index>(m.order);
        const auto ri = static_cast<Eigen::Index>(m.input_nodes.size());
        const auto ro = static_cast<Eigen::Index>(m.output_nodes.size());
        m.a_d = matrix_from_json(j.at("a_tilde_d"), q, q);
        m.b_d = matrix_from_json(j.at("b_tilde_d"), q, ri);
        m.c_d = matrix_from_json(j.at("c_tilde_d"), ro, q);
        m.a_tilde = matrix_from_json(j.at("a_tilde"), q, q);
        m.b_tilde = matrix_from_json(j.at("b_tilde"), q, ri);
        m.c_tilde = matrix_from_json(j.at("c_tilde"), ro, q);
        m.continuous = true;
        m.hankel_singular_values = j.value("hankel_singular_values", std::vector<double>{});
        m.markov_fit_error = j.value("markov_fit_error", 0.0);
        m.spectrum_est.eigenvalues = j.at("spectrum").get<std::vector<double>>();
        m.char_poly_est.coefficients = j.at("char_poly").get<std::vector<double>>();
        m.boundary_block.resize(ro, ri);
        const auto& blk = j.at("boundary_block");
        if (static_cast<Eigen::Index>(blk.size()) != ro) throw InvalidArgument("boundary block has the wrong shape");
        for (Eigen::Index i = 0; i < ro; ++i) {
            if (static_cast<Eigen::Index>(blk[static_cast<std::size_t>(i)].size()) != ri) {
                throw InvalidArgument("boundary block has the wrong shape");
            }
            for (Eigen::Index c = 0; c < ri; ++c) {
                m.boundary_block(i, c) = blk[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<int>();
            }
        }
        m.rounding_residual = j.at("rounding_residual").get<double>();
        m.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed model JSON: ") + e.what());
    }
    return m;
}

Json spectral_report_to_json(const SpectralReport& r, const Spectrum& spec) {
    Json j;
    j["n"] = r.n;
    j["eigenvalues"] = spec.eigenvalues;
    j["char_poly"] = char_poly(spec).coefficients;
    j["edge_count"] = r.edge_count;
    j["edge_rounding_residual"] = r.edge_rounding_residual;
    j["spanning_trees"] = r.spanning_trees;
    j["is_connected"] = r.is_connected;
    j["is_tree"] = r.is_tree;
    j["wiener_index"] = r.wiener_index ? Json(*r.wiener_index) : Json(nullptr);
    j["hoffman_number"] = r.hoffman_number ? Json(*r.hoffman_number) : Json(nullptr);
    j["complement_poly"] = r.complement_poly ? Json(*r.complement_poly) : Json(nullptr);
    j["star_by_simple_eigenvalue"] = r.star_by_simple_eigenvalue;
    j["star_by_three_eigenvalues"] = r.star_by_three_eigenvalues;
    j["diameter_bound"] = r.diameter_bound ? Json(*r.diameter_bound) : Json(nullptr);
    return j;
}

Json sieve_input_to_json(const SieveInput& in) {
    Json j;
    j["n"] = in.n;
    j["boundary_nodes"] = nodes_to_json(in.boundary_nodes);
    j["boundary_degrees"] = in.boundary_degrees;
    Json pairs = Json::array();
    for (const auto& p : in.known_pairs) pairs.push_back({{"u", p.u + 1}, {"v", p.v + 1}, {"present", p.present}});
    j["known_pairs"] = std::move(pairs);
    j["total_degree"] = in.total_degree;
    j["s"] = in.s;
    Json lbs = Json::array();
    for (auto [v, lb] : in.lower_bounds) lbs.push_back({{"node", v + 1}, {"bound", lb}});
    j["lower_bounds"] = std::move(lbs);
    return j;
}

Json sieve_report_to_json(const SieveReport& r) {
    Json j;
    j["partitions"] = r.partitions_found;
    Json seqs = Json::array();
    for (const auto& d : r.graphical_sequences) seqs.push_back(d.degrees);
    j["graphical_sequences"] = std::move(seqs);
    Json cands = Json::array();
    for (const auto& c : r.candidates) {
        cands.push_back({{"graph", graph_json(c.graph)}, {"residual", c.residual}, {"matched", c.matched}});
    }
    j["candidates"] = std::move(cands);
    Json matched = Json::array();
    for (const auto& g : r.matched()) matched.push_back(graph_json(g));
    j["matched"] = std::move(matched);
    j["counters"] = {{"partitions_examined", r.counters.partitions_examined},
                     {"sequences_graphical", r.counters.sequences_graphical},
                     {"graphs_constructed", r.counters.graphs_constructed},
                     {"graphs_after_dedup", r.counters.graphs_after_dedup},
                     {"matched", r.counters.matched},
                     {"search_space_ratio", r.counters.search_space_ratio}};
    j["capacity_exceeded"] = r.capacity_exceeded;
    j["warnings"] = r.warnings;
    return j;
}

std::string matched_edge_lists(const SieveReport& r) {
    std::string out;
    for (const auto& g : r.matched()) out += graph_to_edge_list(g) + "\n";
    return out;
}

}  // namespace nettomo
