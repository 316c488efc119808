#include "nettomo/pipeline.hpp"

#include "nettomo/errors.hpp"

namespace nettomo {

double resolved_delta(const PipelineOptions& opts, int n) {
    return opts.delta > 0.0 ? opts.delta : default_delta(n);
}

int resolved_horizon(const PipelineOptions& opts, int n) { return opts.horizon > 0 ? opts.horizon : 2 * n; }

std::vector<IoRecord> impulse_experiments(const DiscreteSystem& dsys, int horizon) {
    const int r_in = static_cast<int>(dsys.b_d.cols());
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dsys.a_d.rows());
    std::vector<IoRecord> out;
    for (int ch = 0; ch < r_in; ++ch) out.push_back(simulate(dsys, impulse_input(r_in, ch, horizon), x0));
    return out;
}

IdentifiedModel identify(const std::vector<IoRecord>& records, const std::vector<Vertex>& inputs,
                         const std::vector<Vertex>& outputs, int n, const PipelineOptions& opts) {
    const auto markov = markov_from_impulses(records);
    const int max_order = opts.max_order > 0 ? opts.max_order : n;
    auto model = to_continuous(hankel_realize(markov, max_order, opts.rank_tol), markov.delta);
    model.input_nodes = inputs;
    model.output_nodes = outputs;
    return model;
}

PipelineResult run_pipeline(const Graph& g, const std::vector<Vertex>& inputs, const std::vector<Vertex>& outputs,
                            const PipelineOptions& opts) {
    const int n = g.order();
    PipelineResult res;
    res.system = build_steered_system(g, inputs, outputs);
    const auto dsys = discretize(res.system, resolved_delta(opts, n));
    const auto records = impulse_experiments(dsys, resolved_horizon(opts, n));
    res.model = identify(records, inputs, outputs, n, opts);
    res.sieve_input = extract_boundary_block(res.model, n);
    res.report = run_sieve(res.sieve_input, res.model.spectrum_est,
                           SieveOptions{opts.spectral_tol, opts.max_graphs});
    return res;
}

}  // namespace nettomo
