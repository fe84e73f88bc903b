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

#ifndef NODAL_MAGNETIC_HPP
#define NODAL_MAGNETIC_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nodal/discrete.hpp"

namespace nodal {

/// Hessian of an eigenvalue with respect to the fluxes at zero flux.
struct MagneticHessian {
  int n = 0;
  Eigen::MatrixXd matrix;  // beta x beta
  int morse_index = 0;
  bool degenerate = false;  // |det| <= det_tol
};

/// Fills morse_index and degenerate from matrix.
MagneticHessian classify_hessian(int n, Eigen::MatrixXd matrix, double det_tol = 1e-8);

/// Second order perturbation theory around zero flux. Requires a simple
/// eigenvalue; spectrum must be the zero-flux spectrum of op.
MagneticHessian hessian_perturbative(const DiscreteOperator& op, const DiscreteSpectrum& spectrum, int n);

struct FdOptions {
  double step = 1e-3;  // initial step, capped at a tenth of the spectral gap
  bool richardson = true;  // Ridders extrapolation over shrinking steps
};

/// Central differences of the n-th eigenvalue of apply_flux(op, .).
MagneticHessian hessian_fd(const DiscreteOperator& op, int n, const FdOptions& opt = {});

/// Central first differences of the n-th eigenvalue at zero flux.
Eigen::VectorXd flux_gradient_fd(const DiscreteOperator& op, int n, double step = 1e-4);

struct SurplusMorseRow {
  int n = 0;
  double lambda = 0.0;
  int surplus = 0;
  int morse = 0;
  bool degenerate_hessian = false;
  bool pass = false;
};

struct SkippedIndex {
  int n = 0;
  Genericity reason = Genericity::degenerate;
};

struct SurplusMorseTable {
  std::vector<SurplusMorseRow> rows;
  std::vector<SkippedIndex> skipped;
  bool pass = true;
};

SurplusMorseTable verify_surplus_equals_morse(const DiscreteOperator& op);

struct TraceIdentityReport {
  Eigen::MatrixXd sum_hessians;
  Eigen::MatrixXd weighted_sum;
  double sum_scale = 0.0;       // sum of max-norms of the Hessians
  double weighted_scale = 0.0;  // same with |lambda| weights
  double sum_residual = 0.0;    // max-norm of sum_hessians / sum_scale
  double weighted_residual = 0.0;
  bool pass = false;
};

/// Requires a simple spectrum.
TraceIdentityReport trace_identities(const DiscreteOperator& op, double tol = 1e-6);

/// True when the surplus sequence is not of the shape (0,...,0,beta,...,beta)
/// for beta > 0. Requires every entry generic.
bool forbidden_surplus_check(const NodalReport& report, int beta);

/// Shape test on a raw surplus sequence.
bool has_forbidden_shape(std::span<const int> surplus, int beta);

struct GirthFromTraces {
  int girth = 0;
  std::optional<int> scalar_girth;  // same test on traces of the Hessians
  bool ambiguous = false;           // a ratio within one decade of threshold
  double threshold = 0.0;
  std::vector<double> ratios;         // k = 2, 3, ..., |V|
  std::vector<double> scalar_ratios;  // same, scalar variant
};

inline constexpr double kGirthThreshold = 1e-9;

/// Smallest k with sum_n lambda_n^(k-1) H_n nonzero. The powers are taken
/// about the centre of the spectrum, which leaves every sum up to and
/// including the first nonzero one unchanged.
GirthFromTraces girth_from_traces(const DiscreteOperator& op, double threshold = kGirthThreshold);

}  // namespace nodal

#endif  // NODAL_MAGNETIC_HPP
