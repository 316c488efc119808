#include "nettomo/io_record.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nettomo/errors.hpp"

namespace nettomo {

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string io_record_to_csv(const IoRecord& rec) {
    std::string out = "k";
    for (Eigen::Index j = 0; j < rec.inputs.cols(); ++j) out += ",v_" + std::to_string(j + 1);
    for (Eigen::Index j = 0; j < rec.outputs.cols(); ++j) out += ",w_" + std::to_string(j + 1);
    out += '\n';
    for (Eigen::Index k = 0; k < rec.outputs.rows(); ++k) {
        out += std::to_string(k);
        for (Eigen::Index j = 0; j < rec.inputs.cols(); ++j) out += "," + format_real(rec.inputs(k, j));
        for (Eigen::Index j = 0; j < rec.outputs.cols(); ++j) out += "," + format_real(rec.outputs(k, j));
        out += '\n';
    }
    return out;
}

IoRecord io_record_from_csv(const std::string& text, double delta, int n) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty IO record");
    int r_in = 0, r_out = 0;
    {
        std::istringstream hs(line);
        std::string cell;
        std::getline(hs, cell, ',');
        if (cell != "k") throw InvalidArgument("IO record header must start with \"k\"");
        while (std::getline(hs, cell, ',')) {
            if (cell.rfind("v_", 0) == 0) {
                if (r_out) throw InvalidArgument("input columns must precede output columns");
                ++r_in;
            } else if (cell.rfind("w_", 0) == 0) {
                ++r_out;
            } else {
                throw InvalidArgument("unexpected IO record column \"" + cell + "\"");
            }
        }
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        std::getline(ls, cell, ',');
        if (std::stol(cell) != static_cast<long>(rows.size())) throw InvalidArgument("IO record rows out of order");
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidArgument("bad number \"" + cell + "\" in IO record");
            }
        }
        if (static_cast<int>(row.size()) != r_in + r_out) throw InvalidArgument("ragged IO record row");
        rows.push_back(std::move(row));
    }
    IoRecord rec;
    rec.delta = delta;
    const auto k = static_cast<Eigen::Index>(rows.size());
    rec.inputs.resize(k, r_in);
    rec.outputs.resize(k, r_out);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < r_in; ++j) rec.inputs(i, j) = row[static_cast<std::size_t>(j)];
        for (int j = 0; j < r_out; ++j) rec.outputs(i, j) = row[static_cast<std::size_t>(r_in + j)];
    }
    rec.initial_state = Eigen::VectorXd::Zero(n);
    return rec;
}

std::string meta_to_json(const ExperimentMeta& meta) {
    nlohmann::ordered_json j;
    j["delta"] = meta.delta;
    j["n"] = meta.n;
    j["inputs"] = nlohmann::ordered_json::array();
    for (Vertex v : meta.inputs) j["inputs"].push_back(v + 1);
    j["outputs"] = nlohmann::ordered_json::array();
    for (Vertex v : meta.outputs) j["outputs"].push_back(v + 1);
    j["horizon"] = meta.horizon;
    j["records"] = meta.records;
    return j.dump(2) + "\n";
}

ExperimentMeta meta_from_json(const std::string& text) {
    ExperimentMeta meta;
    try {
        const auto j = nlohmann::json::parse(text);
        meta.delta = j.at("delta").get<double>();
        meta.n = j.at("n").get<int>();
        for (int v : j.at("inputs").get<std::vector<int>>()) meta.inputs.push_back(v - 1);
        for (int v : j.at("outputs").get<std::vector<int>>()) meta.outputs.push_back(v - 1);
        meta.horizon = j.value("horizon", 0);
        if (j.contains("records")) meta.records = j["records"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed experiment metadata: ") + e.what());
    }
    return meta;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InvalidArgument("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace nettomo
