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

#ifndef NODAL_DISCRETE_HPP
#define NODAL_DISCRETE_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nodal/graph.hpp"

namespace nodal {

enum class OperatorKind { normalized, generalized };

/// Real symmetric operator on a graph together with the gauge used to
/// attach magnetic fluxes.
struct DiscreteOperator {
  Graph graph;
  Eigen::MatrixXd base;
  OperatorKind kind = OperatorKind::generalized;
  CycleBasis gauge;

  int betti() const { return graph.betti_number(); }
  std::vector<double> diagonal() const;
  std::vector<double> edge_weights() const;
};

DiscreteOperator build_normalized(const Graph& g);

/// edge_weights[e] must be strictly negative.
DiscreteOperator build_generalized(const Graph& g, std::span<const double> edge_weights,
                                   std::span<const double> diagonal);

/// Hermitian matrix with phase e^{i flux[c]} on entry (u, v) of chord c.
Eigen::MatrixXcd apply_flux(const DiscreteOperator& op, std::span<const double> flux);

struct SpectralTolerances {
  double simplicity = 1e-8;   // relative to the spectral width
  double vertex_zero = 1e-8;  // relative to max |f|
  double hermitian = 1e-12;   // absolute
};

enum class Genericity { generic, degenerate, vertex_zero };

std::string to_string(Genericity g);

template <class Scalar>
struct BasicSpectrum {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // orthonormal columns
  std::vector<Genericity> status;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  /// Eigen indices are 1-based throughout the public API.
  double lambda(int n) const { return eigenvalues(n - 1); }
  auto vector(int n) const { return eigenvectors.col(n - 1); }
  bool generic(int n) const { return status[n - 1] == Genericity::generic; }
  bool simple(int n) const { return status[n - 1] != Genericity::degenerate; }
  bool all_generic() const;
  bool all_simple() const;
  std::vector<int> generic_set() const;
};

using DiscreteSpectrum = BasicSpectrum<double>;
using HermitianSpectrum = BasicSpectrum<std::complex<double>>;

DiscreteSpectrum eigensystem(const Eigen::MatrixXd& m, const SpectralTolerances& tol = {});
HermitianSpectrum eigensystem(const Eigen::MatrixXcd& m, const SpectralTolerances& tol = {});

/// Eigenvalues only, ascending.
Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m, double hermitian_tol = 1e-12);

struct NodalCounts {
  std::vector<int> sign_changes;  // edge indices
  int phi = 0;
  int nu = 0;
  int surplus = 0;
};

struct NodalEntry {
  int n = 0;
  double lambda = 0.0;
  Genericity status = Genericity::generic;
  std::optional<NodalCounts> counts;  // only for generic entries
};

struct NodalReport {
  int betti = 0;
  std::vector<NodalEntry> entries;

  bool all_generic() const;
  /// phi per entry, -1 where the entry is not generic.
  std::vector<int> phi_sequence() const;
  std::vector<int> surplus_sequence() const;
};

/// Number of connected components once the edges in removed are deleted.
int component_count(const Graph& g, std::span<const int> removed_edges);

NodalReport nodal_report(const DiscreteOperator& op, const DiscreteSpectrum& spectrum);

struct TreeVerdict {
  bool tree_count = false;               // phi_n = n - 1 for every n
  std::optional<int> first_violation;    // 1-based n
};

/// Throws NonGenericError when some entry is not generic.
TreeVerdict is_tree_nodal_count(const NodalReport& report);

}  // namespace nodal

#endif  // NODAL_DISCRETE_HPP
