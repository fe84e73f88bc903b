// Copyright 2026 The nodal-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NODAL_IO_HPP
#define NODAL_IO_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodal/discrete.hpp"
#include "nodal/discretizer.hpp"
#include "nodal/ensemble.hpp"
#include "nodal/graph.hpp"
#include "nodal/magnetic.hpp"
#include "nodal/metric.hpp"
#include "nodal/torus.hpp"

namespace nodal {

using Json = nlohmann::ordered_json;

/// Throws InvalidInput on a missing file or malformed JSON.
Json read_json_file(const std::string& path);

/// {"vertices": n, "edges": [[u, v], ...]} with 1-based vertices.
Graph graph_from_json(const Json& j);
Json to_json(const Graph& g);

/// {"graph": ..., "kind": "normalized" | "generalized", "diagonal": [...],
/// "edge_weights": [...]}. A bare graph object means the normalized Laplacian.
DiscreteOperator operator_from_json(const Json& j);

/// Graph schema plus "lengths" and optional "conditions".
MetricGraph metric_graph_from_json(const Json& j);

/// {"generators": [...], "coefficients": rows}. A row holds one entry per
/// generator; an entry is an integer, a "p/q" string or a [num, den] pair.
/// With one generator a row may be the bare pair [num, den].
LengthDecomposition decomposition_from_json(const Json& j);

/// Looks for "decomposition" or "relations" next to the metric graph. Without
/// either, the lengths are taken as rationally independent.
LengthDecomposition decomposition_for(const Json& j, const MetricGraph& mg);

Rational rational_from_json(const Json& j);

/// Shortest round-trip decimal form; identical bytes on every run.
std::string format_number(double x);

void write_nodal_csv(std::ostream& os, const NodalReport& report);
void write_surplus_morse_csv(std::ostream& os, const SurplusMorseTable& table);
/// morse may be empty or hold one value per entry (-1 for none).
void write_metric_spectrum_csv(std::ostream& os, const MetricNodalReport& report, std::span<const int> morse = {});
void write_statistics_csv(std::ostream& os, const SurplusStatistics& stats);
void write_surplus_series_csv(std::ostream& os, std::span<const int> n, std::span<const int> sigma);
/// Long format (alpha, n, lambda), flux swept on the first chord over [0, 2 pi].
void write_flux_sweep_csv(std::ostream& os, const DiscreteOperator& op, int points = 101);
/// One row per Hessian entry of every generic index: n, i, j, perturbative, fd.
void write_hessian_scatter_csv(std::ostream& os, const DiscreteOperator& op);
void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary);

std::string skip_reason(const SkippedIndex& s);
Json to_json(const SkippedIndex& s);
Json to_json(const SurplusMorseTable& table);
Json to_json(const GirthFromTraces& girth);
Json to_json(const EquilateralReport& report);
Json to_json(const SurplusTransferReport& report);
Json to_json(const RevisitReport& report);
Json to_json(const EnsembleSummary& summary);
Json to_json(const GirthSweep& sweep);
Json to_json(const SymmetryReport& report);

}  // namespace nodal

#endif  // NODAL_IO_HPP
