#pragma once

#include <vector>

#include "nettomo/dynamics.hpp"
#include "nettomo/graph.hpp"
#include "nettomo/sieve.hpp"
#include "nettomo/sysid.hpp"

namespace nettomo {

struct PipelineOptions {
    double delta = 0.0;  // 0 selects 1 / (2n)
    int horizon = 0;     // Markov parameters per experiment; 0 selects 2n
    double rank_tol = kDefaultRankTol;
    int max_order = 0;   // 0 selects n
    double spectral_tol = 1e-4;
    long long max_graphs = 1'000'000;
};

double resolved_delta(const PipelineOptions& opts, int n);
int resolved_horizon(const PipelineOptions& opts, int n);

// One unit-impulse experiment per input channel, each horizon steps long.
std::vector<IoRecord> impulse_experiments(const DiscreteSystem& dsys, int horizon);

// Markov extraction, Ho-Kalman and conversion to continuous time. The model
// carries the port lists so the boundary block can be interpreted later.
IdentifiedModel identify(const std::vector<IoRecord>& records, const std::vector<Vertex>& inputs,
                         const std::vector<Vertex>& outputs, int n, const PipelineOptions& opts = {});

struct PipelineResult {
    SteeredSystem system;
    IdentifiedModel model;
    SieveInput sieve_input;
    SieveReport report;
};

// Simulate, identify and sieve in memory.
PipelineResult run_pipeline(const Graph& g, const std::vector<Vertex>& inputs, const std::vector<Vertex>& outputs,
                            const PipelineOptions& opts = {});

}  // namespace nettomo
