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

#ifndef NODAL_DISCRETIZER_HPP
#define NODAL_DISCRETIZER_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nodal/metric.hpp"
#include "nodal/torus.hpp"

namespace nodal {

/// Random walk matrix, P(u, v) = 1 / deg(u) on edges.
Eigen::MatrixXd transition_matrix(const Graph& g);

/// Exact rational x with lengths_at(x) == counts, if one exists.
std::optional<std::vector<Rational>> length_preimage(const LengthDecomposition& decomp, std::span<const int> counts);

struct DiscretizedVersion {
  std::vector<int> counts;
  Subdivision subdivision;
  MetricGraph equilateral;  // unit lengths on the subdivided graph
};

/// Throws InvalidInput when counts is not in the image of the length map.
DiscretizedVersion discretize(const Graph& g, const LengthDecomposition& decomp, std::vector<int> counts);

struct DiscretizationList {
  std::vector<std::vector<int>> counts;  // lexicographic order
  std::optional<int> minimal_bound;      // set when counts is empty
};

DiscretizationList enumerate_discretizations(const LengthDecomposition& decomp, int bound);

struct BranchValue {
  int p = 0;
  double k = 0.0;
  double lambda() const { return k * k; }
};

/// k values b_p(1 - mu) for p = 0..p_max. mu must lie in (0, 2).
std::vector<BranchValue> arccos_branches(double mu, int p_max);

struct BranchCheck {
  int p = 0;
  double k = 0.0;
  bool is_root = false;
  double root_distance = 0.0;
};

struct MuCheck {
  int index = 0;  // 1-based position in the normalized spectrum
  double mu = 0.0;
  Genericity status = Genericity::generic;
  std::vector<BranchCheck> branches;
  double lift_error = 0.0;         // vertex traces against D^{-1/2} f
  double scaled_lift_error = 0.0;  // vertex traces against D^{1/2} f
  bool pass = false;               // branches are roots and lift_error small
};

struct EquilateralReport {
  double k_ceiling = 0.0;
  std::vector<MuCheck> checks;          // generic mu outside {0, 2}
  std::vector<SkippedIndex> skipped;    // non-generic or mu in {0, 2}
  bool branch_roots = true;             // every branch value of every mu is a root
  bool dirichlet_check = true;          // every other root lies in pi Z
  bool multiplicity_check = true;       // non-Dirichlet multiplicities match
  std::vector<double> unexplained_roots;
  bool trace_lift_check = true;
  bool scaled_lift_check = true;
  bool pass() const { return branch_roots && dirichlet_check && multiplicity_check && trace_lift_check; }
};

struct EquilateralOptions {
  int p_max = 3;
  double root_tol = 1e-8;
  double lift_tol = 1e-6;
};

EquilateralReport verify_equilateral_connection(const Graph& g, const EquilateralOptions& opt = {});

struct TransferBranch {
  int p = 0;
  double k = 0.0;
  int n_metric = 0;
  int sigma_metric = -1;
  int expected_sigma = 0;
  int morse = -1;
  int expected_morse = 0;
  int derivative_sign = 0;
  bool pass = false;
};

struct TransferEntry {
  int index = 0;
  double mu = 0.0;
  int sigma_discrete = 0;
  int morse_discrete = 0;
  std::vector<TransferBranch> branches;
  bool pass = false;
};

struct SurplusTransferReport {
  bool vacuous = false;
  std::string vacuous_reason;
  int betti = 0;
  std::vector<TransferEntry> entries;
  std::vector<SkippedIndex> skipped;
  bool pass = false;
};

SurplusTransferReport verify_surplus_transfer(const Graph& g, int p_max = 3);

struct DirectionalCheck {
  double k = 0.0;
  std::vector<double> derivatives;  // t = 0, 0.25, 0.5, 0.75, 1
  bool pass = false;
};

struct DirectionalReport {
  std::vector<DirectionalCheck> checks;
  bool pass = true;
};

/// At each root x = k xi, the derivative of F along t y + (1 - t) xi,
/// where lengths_at(y) = counts, keeps one sign for t in [0, 1].
DirectionalReport directional_derivative_sign_check(const MetricGraph& mg, const LengthDecomposition& decomp,
                                                    std::span<const int> counts,
                                                    std::span<const MetricRoot> roots);

}  // namespace nodal

#endif  // NODAL_DISCRETIZER_HPP
