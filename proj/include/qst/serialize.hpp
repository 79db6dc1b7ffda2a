#pragma once

// JSON forms:
//   matrix:  {"dim": m, "re": [[...]], "im": [[...]]}
//   state:   matrix form plus "kind": "density_matrix"
//   basis:   {"label": "...", "elements": [matrix, ...]}
// Datasets are a CSV (header "index,outcome", 1-based indices) plus a
// sidecar "<csv>.json" holding basis_label, m, model, seed, n and rng.

#include <string>

#include "json.hpp"
#include "qst/basis.hpp"
#include "qst/hermitian.hpp"
#include "qst/sampler.hpp"
#include "qst/state.hpp"

namespace qst {

using Json = nlohmann::json;

Json to_json(const HermitianMatrix& a);
Json to_json(const DensityMatrix& rho);

/// Throws ArgumentError on malformed input (missing keys, ragged rows).
HermitianMatrix hermitian_from_json(const Json& j);
/// Parses and validates (TraceError / PositivityError propagate).
DensityMatrix density_from_json(const Json& j);
ObservableBasis basis_from_json(const Json& j, const std::string& fallback_label);

void write_dataset(const std::string& csv_path, const Dataset& data);
/// Throws ArgumentError on a missing sidecar, bad header or index out of range.
Dataset read_dataset(const std::string& csv_path);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace qst
