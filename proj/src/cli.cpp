#include "nettomo/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nettomo/dynamics.hpp"
#include "nettomo/errors.hpp"
#include "nettomo/io_record.hpp"
#include "nettomo/pipeline.hpp"
#include "nettomo/random.hpp"
#include "nettomo/serialize.hpp"
#include "nettomo/spectral.hpp"

namespace fs = std::filesystem;

namespace nettomo {

namespace {

struct GraphSource {
    std::string path;
    std::string generate;
    std::uint64_t seed = 0;
};

void add_graph_options(CLI::App* cmd, GraphSource& src) {
    cmd->add_option("--graph", src.path, "Graph file (JSON or edge-list text)");
    cmd->add_option("--generate", src.generate,
                    "Generator: path:N, cycle:N, star:N, complete:N, empty:N or er:N:P (connected G(N,P))");
    cmd->add_option("--seed", src.seed, "Seed for randomized generators");
}

Graph generate_graph(const std::string& spec, std::uint64_t seed) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 2) throw InvalidArgument("generator spec must look like kind:N[:P]");
    int n = 0;
    try {
        n = std::stoi(parts[1]);
    } catch (const std::exception&) {
        throw InvalidArgument("bad vertex count in generator spec " + spec);
    }
    const auto& kind = parts[0];
    if (kind == "path") return path_graph(n);
    if (kind == "cycle") return cycle_graph(n);
    if (kind == "star") return star_graph(n);
    if (kind == "complete") return complete_graph(n);
    if (kind == "empty") return Graph(n);
    if (kind == "er") {
        if (parts.size() != 3) throw InvalidArgument("er generator needs er:N:P");
        const double p = std::stod(parts[2]);
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("edge probability must lie strictly between 0 and 1");
        auto rng = substream(seed, "graph");
        long long rejections = 0;
        return random_connected_graph(n, p, rng, rejections, 100);
    }
    throw InvalidArgument("unknown generator kind " + kind);
}

Graph load_graph(const GraphSource& src) {
    if (!src.path.empty() && !src.generate.empty()) throw InvalidArgument("give either --graph or --generate, not both");
    if (!src.path.empty()) return read_graph_file(src.path);
    if (!src.generate.empty()) return generate_graph(src.generate, src.seed);
    throw InvalidArgument("a graph is required (--graph or --generate)");
}

std::vector<Vertex> to_zero_based(const std::vector<int>& labels) {
    std::vector<Vertex> out;
    for (int v : labels) out.push_back(v - 1);
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Config values fill options that were not given on the command line.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    Json cfg;
    try {
        cfg = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed config file: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        std::string name = "--" + key;
        std::replace(name.begin(), name.end(), '_', '-');
        CLI::Option* opt = cmd->get_option_no_throw(name);
        if (!opt) throw InvalidArgument("config key \"" + key + "\" is not an option of " + cmd->get_name());
        if (opt->count() > 0) continue;
        auto as_text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) {
            for (const auto& v : value) opt->add_result(as_text(v));
        } else {
            opt->add_result(as_text(value));
        }
        opt->run_callback();
    }
}

void print_vector(std::ostream& out, const char* label, const std::vector<double>& v, int precision = 10) {
    out << label;
    for (double x : v) out << ' ' << std::setprecision(precision) << x;
    out << '\n';
}

void print_model(std::ostream& out, const IdentifiedModel& model) {
    out << "order: " << model.order << '\n';
    print_vector(out, "spectrum:", model.spectrum_est.eigenvalues);
    const auto& c = model.char_poly_est.coefficients;
    out << "char poly coefficients a1..a" << model.order << ':';
    for (std::size_t i = 1; i < c.size(); ++i) out << ' ' << std::setprecision(10) << c[i];
    out << '\n';
    out << "boundary block (C A B, rounded; residual " << std::setprecision(3) << model.rounding_residual << "):\n";
    for (Eigen::Index i = 0; i < model.boundary_block.rows(); ++i) {
        out << ' ';
        for (Eigen::Index j = 0; j < model.boundary_block.cols(); ++j) out << ' ' << std::setw(3) << model.boundary_block(i, j);
        out << '\n';
    }
}

int cmd_simulate(const GraphSource& src, const std::vector<int>& inputs, std::vector<int> outputs,
                 std::optional<double> delta, std::optional<int> horizon, const std::string& out_dir,
                 std::ostream& out, std::ostream& err) {
    const Graph g = load_graph(src);
    const int n = g.order();
    if (outputs.empty()) outputs = inputs;
    if (delta && !(*delta > 0.0)) throw InvalidArgument("--delta must be positive");
    if (horizon && *horizon < 1) throw InvalidArgument("--horizon must be positive");
    if (!is_connected(g)) err << "warning: graph is disconnected; simulating anyway\n";

    PipelineOptions opts;
    opts.delta = delta.value_or(0.0);
    opts.horizon = horizon.value_or(0);
    const auto sys = build_steered_system(g, to_zero_based(inputs), to_zero_based(outputs));
    const auto dsys = discretize(sys, resolved_delta(opts, n));
    const int h = resolved_horizon(opts, n);
    const auto records = impulse_experiments(dsys, h);

    ExperimentMeta meta;
    meta.delta = dsys.delta;
    meta.n = n;
    meta.inputs = sys.input_nodes;
    meta.outputs = sys.output_nodes;
    meta.horizon = h;
    const fs::path dir(out_dir);
    for (std::size_t j = 0; j < records.size(); ++j) {
        const std::string name = "impulse_" + std::to_string(j + 1) + ".csv";
        write_text_atomic(dir / name, io_record_to_csv(records[j]));
        meta.records.push_back(name);
    }
    write_text_atomic(dir / "experiment.json", meta_to_json(meta));
    out << "wrote " << records.size() << " impulse records (" << h << " steps, delta " << std::setprecision(17)
        << dsys.delta << ") to " << dir.string() << '\n';
    return kExitOk;
}

fs::path experiment_path(const std::string& arg) {
    fs::path p(arg);
    return fs::is_directory(p) ? p / "experiment.json" : p;
}

int cmd_identify(const std::string& records_arg, double rank_tol, int max_order, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    const fs::path meta_path = experiment_path(records_arg);
    const auto meta = meta_from_json(read_text_file(meta_path));
    if (meta.records.size() != meta.inputs.size()) {
        throw InvalidArgument("experiment lists " + std::to_string(meta.records.size()) + " records for " +
                              std::to_string(meta.inputs.size()) + " inputs");
    }
    std::vector<IoRecord> records;
    for (const auto& name : meta.records) {
        records.push_back(io_record_from_csv(read_text_file(meta_path.parent_path() / name), meta.delta, meta.n));
    }
    PipelineOptions opts;
    opts.rank_tol = rank_tol;
    opts.max_order = max_order;
    const auto model = identify(records, meta.inputs, meta.outputs, meta.n, opts);
    const fs::path dest = out_path.empty() ? meta_path.parent_path() / "model.json" : fs::path(out_path);
    write_text_atomic(dest, dump(model_to_json(model, meta.n)));
    for (const auto& w : model.warnings) err << "warning: " << w << '\n';
    print_model(out, model);
    out << "model written to " << dest.string() << '\n';

    SieveInput in;
    try {
        in = extract_boundary_block(model, meta.n);
    } catch (const IdentificationError& e) {
        err << "identification failed: " << e.what() << '\n';
        return kExitIdentification;
    }
    out << "total degree: " << in.total_degree << "\ns: " << in.s << '\n';
    if (in.boundary_nodes.size() == static_cast<std::size_t>(meta.n)) {
        out << "every node is ported: the boundary block is -L and no sieve is needed\n";
    }
    return kExitOk;
}

int cmd_sieve(const std::string& model_path, std::optional<int> n_override, double spectral_tol, long long max_graphs,
              const std::string& out_path, const std::string& matched_path, std::ostream& out, std::ostream& err) {
    int n = 0;
    const auto model = model_from_json(Json::parse(read_text_file(model_path)), &n);
    if (n_override) n = *n_override;
    SieveInput in;
    try {
        in = extract_boundary_block(model, n);
    } catch (const IdentificationError& e) {
        err << "cannot sieve: " << e.what() << '\n';
        return kExitIdentification;
    }
    const auto report = run_sieve(in, model.spectrum_est, SieveOptions{spectral_tol, max_graphs});
    const fs::path dest =
        out_path.empty() ? fs::path(model_path).parent_path() / "sieve_report.json" : fs::path(out_path);
    Json j = sieve_report_to_json(report);
    j["input"] = sieve_input_to_json(in);
    write_text_atomic(dest, dump(j));
    if (!matched_path.empty()) write_text_atomic(matched_path, matched_edge_lists(report));
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    out << "s = " << in.s << ", " << n - static_cast<int>(in.boundary_nodes.size()) << " unresolved degrees\n";
    out << "partitions:";
    for (const auto& p : report.partitions_found) {
        out << " {";
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
        out << '}';
    }
    out << '\n';
    out << std::left << std::setw(22) << "stage" << "count\n"
        << std::setw(22) << "partitions" << report.counters.partitions_examined << '\n'
        << std::setw(22) << "graphical sequences" << report.counters.sequences_graphical << '\n'
        << std::setw(22) << "graphs constructed" << report.counters.graphs_constructed << '\n'
        << std::setw(22) << "after dedup" << report.counters.graphs_after_dedup << '\n'
        << std::setw(22) << "spectral matches" << report.counters.matched << '\n'
        << std::right;
    for (const auto& g : report.matched()) out << "match: " << graph_to_edge_list(g) << '\n';
    out << "report written to " << dest.string() << '\n';
    return report.capacity_exceeded ? kExitCapacity : kExitOk;
}

int cmd_report(const GraphSource& src, const std::vector<double>& eigenvalues, const std::string& out_path,
               const std::string& csv_path, std::ostream& out) {
    Spectrum spec;
    SpectralReport rep;
    if (!eigenvalues.empty()) {
        if (!src.path.empty() || !src.generate.empty()) throw InvalidArgument("give a graph or a spectrum, not both");
        spec.eigenvalues = eigenvalues;
        std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
        rep = spectral_report(spec, spec.size());
    } else {
        const Graph g = load_graph(src);
        spec = spectrum(g);
        rep = spectral_report(g);
    }
    const std::string text = dump(spectral_report_to_json(rep, spec));
    if (out_path.empty()) {
        out << text;
    } else {
        write_text_atomic(out_path, text);
    }
    if (!csv_path.empty()) {
        std::string csv = "index,eigenvalue\n";
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
            csv += std::to_string(i + 1) + "," + format_real(spec.eigenvalues[i]) + "\n";
        }
        write_text_atomic(csv_path, csv);
    }
    return kExitOk;
}

int cmd_census(int n_min, int n_max, double p, int trials, std::uint64_t seed, const std::string& out_path,
               std::ostream& out) {
    if (n_min < 1 || n_max < n_min) throw InvalidArgument("census needs 1 <= n-min <= n-max");
    std::string csv = "n,fraction,controllable,trials,sigma\n";
    for (int n = n_min; n <= n_max; ++n) {
        const auto res = controllability_census(n, p, trials, seed);
        const double f = res.fraction();
        const double sigma = std::sqrt(f * (1.0 - f) / trials);
        csv += std::to_string(n) + "," + format_real(f) + "," + std::to_string(res.controllable) + "," +
               std::to_string(trials) + "," + format_real(sigma) + "\n";
    }
    if (out_path.empty()) {
        out << csv;
    } else {
        write_text_atomic(out_path, csv);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consensus network tomography: simulate, identify and sieve candidate topologies"};
    app.require_subcommand(1);

    std::string config;
    GraphSource sim_src;
    std::vector<int> sim_inputs, sim_outputs;
    std::optional<double> sim_delta;
    std::optional<int> sim_horizon;
    std::string sim_out = ".";
    auto* sim = app.add_subcommand("simulate", "Run one impulse experiment per input port");
    add_graph_options(sim, sim_src);
    sim->add_option("--inputs", sim_inputs, "Input nodes (1-based)")->delimiter(',');
    sim->add_option("--outputs", sim_outputs, "Output nodes (default: the inputs)")->delimiter(',');
    sim->add_option("--delta", sim_delta, "Sampling period (default 1/(2n))");
    sim->add_option("--horizon", sim_horizon, "Steps per experiment (default 2n)");
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--config", config, "JSON config; command-line flags take precedence");

    std::string id_records, id_out;
    double id_rank_tol = kDefaultRankTol;
    int id_max_order = 0;
    auto* idc = app.add_subcommand("identify", "Realize a model from impulse records");
    idc->add_option("--records", id_records, "experiment.json or the directory holding it")->required();
    idc->add_option("--rank-tol", id_rank_tol, "Relative singular-value cutoff");
    idc->add_option("--max-order", id_max_order, "Order cap (default n)");
    idc->add_option("--out", id_out, "Model JSON path (default <records>/model.json)");
    idc->add_option("--config", config, "JSON config; command-line flags take precedence");

    std::string sv_model, sv_out, sv_matched;
    std::optional<int> sv_n;
    double sv_tol = 1e-4;
    long long sv_max = 1'000'000;
    auto* svc = app.add_subcommand("sieve", "Enumerate topologies consistent with an identified model");
    svc->add_option("--model", sv_model, "Model JSON from identify")->required();
    svc->add_option("--n", sv_n, "Agent count (default: from the model file)");
    svc->add_option("--spectral-tol", sv_tol, "Max eigenvalue deviation for a match");
    svc->add_option("--max-graphs", sv_max, "Construction cap");
    svc->add_option("--out", sv_out, "Report JSON path (default next to the model)");
    svc->add_option("--matched-out", sv_matched, "Text file, one matched edge list per line");
    svc->add_option("--config", config, "JSON config; command-line flags take precedence");

    GraphSource rp_src;
    std::vector<double> rp_spectrum;
    std::string rp_out, rp_csv;
    auto* rpc = app.add_subcommand("report", "Structural facts derivable from the Laplacian spectrum");
    add_graph_options(rpc, rp_src);
    rpc->add_option("--spectrum", rp_spectrum, "Comma-separated eigenvalues instead of a graph")->delimiter(',');
    rpc->add_option("--out", rp_out, "Report JSON path (default stdout)");
    rpc->add_option("--eigen-csv", rp_csv, "Eigenvalue CSV for plotting");
    rpc->add_option("--config", config, "JSON config; command-line flags take precedence");

    int cs_min = 2, cs_max = 8, cs_trials = 500;
    double cs_p = 0.5;
    std::uint64_t cs_seed = 0;
    std::string cs_out;
    auto* csc = app.add_subcommand("census", "Fraction of random connected graphs controllable from one node");
    csc->add_option("--n-min", cs_min, "Smallest n");
    csc->add_option("--n-max", cs_max, "Largest n");
    csc->add_option("--p", cs_p, "Edge probability");
    csc->add_option("--trials", cs_trials, "Graphs per n");
    csc->add_option("--seed", cs_seed, "Seed");
    csc->add_option("--out", cs_out, "CSV path (default stdout)");
    csc->add_option("--config", config, "JSON config; command-line flags take precedence");

    std::vector<std::string> argv_store{"nettomo"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        for (auto* cmd : app.get_subcommands()) apply_config(cmd, config);
        if (sim->parsed()) return cmd_simulate(sim_src, sim_inputs, sim_outputs, sim_delta, sim_horizon, sim_out, out, err);
        if (idc->parsed()) return cmd_identify(id_records, id_rank_tol, id_max_order, id_out, out, err);
        if (svc->parsed()) return cmd_sieve(sv_model, sv_n, sv_tol, sv_max, sv_out, sv_matched, out, err);
        if (rpc->parsed()) return cmd_report(rp_src, rp_spectrum, rp_out, rp_csv, out);
        if (csc->parsed()) return cmd_census(cs_min, cs_max, cs_p, cs_trials, cs_seed, cs_out, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const IdentificationError& e) {
        err << "identification error: " << e.what() << '\n';
        return kExitIdentification;
    } catch (const ComputationError& e) {
        err << "computation error: " << e.what() << '\n';
        return kExitIdentification;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

}  // namespace nettomo
