#pragma once

#include <string>

#include <json.hpp>

#include "nettomo/sieve.hpp"
#include "nettomo/spectral.hpp"
#include "nettomo/sysid.hpp"

namespace nettomo {

using Json = nlohmann::ordered_json;

// Model files carry n alongside the realization; matrices are row-major
// arrays of reals and node labels are 1-based.
Json model_to_json(const IdentifiedModel& model, int n);
IdentifiedModel model_from_json(const Json& j, int* n = nullptr);

Json spectral_report_to_json(const SpectralReport& r, const Spectrum& spec);
Json sieve_input_to_json(const SieveInput& in);
Json sieve_report_to_json(const SieveReport& r);

// One matched graph per line as a 1-based edge list.
std::string matched_edge_lists(const SieveReport& r);

}  // namespace nettomo
