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

#ifndef NODAL_METRIC_HPP
#define NODAL_METRIC_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nodal/discrete.hpp"
#include "nodal/graph.hpp"
#include "nodal/magnetic.hpp"

namespace nodal {

enum class VertexCondition { neumann, dirichlet };

class MetricGraph {
 public:
  /// Throws InvalidInput on non-positive lengths or size mismatches.
  MetricGraph(Graph graph, std::vector<double> lengths, std::vector<VertexCondition> conditions = {});

  const Graph& graph() const { return graph_; }
  const std::vector<double>& lengths() const { return lengths_; }
  const std::vector<VertexCondition>& conditions() const { return conditions_; }
  double total_length() const;
  bool all_neumann() const;
  int betti() const { return graph_.betti_number(); }

 private:
  Graph graph_;
  std::vector<double> lengths_;
  std::vector<VertexCondition> conditions_;
};

/// Unit equilateral Neumann graph.
MetricGraph equilateral(const Graph& g, double length = 1.0);

/// Bond scattering data. Layout follows Graph::bond: forward bonds first.
struct SecularSystem {
  Graph graph;
  Eigen::MatrixXd scattering;     // S, real orthogonal
  std::vector<int> chord_bonds;   // forward bond of each chord
  int scattering_det_sign = 1;    // det S
  std::complex<double> det_root;  // principal sqrt(det S)

  int bonds() const { return graph.bond_count(); }
  /// U = exp(i(A + kE)) S for arbitrary real lengths.
  Eigen::MatrixXcd propagator(std::span<const double> lengths, double k, std::span<const double> flux) const;
};

SecularSystem secular_system(const Graph& g, std::span<const VertexCondition> conditions = {});
SecularSystem secular_system(const MetricGraph& mg);

/// Real secular function. Lengths may be any reals here so the same
/// routine serves the torus coordinates. Throws ConvergenceError when the
/// imaginary residue is not negligible.
double secular_value(const SecularSystem& sys, std::span<const double> lengths, double k,
                     std::span<const double> flux = {});
double secular_value(const MetricGraph& mg, double k, std::span<const double> flux = {});

/// Number of k-eigenvalues in (0, k], with multiplicity, from the
/// eigenphases of U. nullopt when k is too close to an eigenvalue.
std::optional<int> counting_function(const SecularSystem& sys, std::span<const double> lengths, double k,
                                     std::span<const double> flux = {});

struct MetricRoot {
  double k = 0.0;
  int multiplicity = 1;
  bool simple() const { return multiplicity == 1; }
};

struct KSpectrumOptions {
  double root_tol = 1e-12;   // bisection width in k
  int max_refinements = 3;   // scan step halvings before giving up
  bool weyl_check = true;
};

/// All roots in (0, k_max] in ascending order.
std::vector<MetricRoot> k_spectrum(const MetricGraph& mg, double k_max, std::span<const double> flux = {},
                                   const KSpectrumOptions& opt = {});

/// Roots in (lo, hi] with multiplicity, for lengths that need not belong
/// to a MetricGraph object.
std::vector<MetricRoot> roots_in_window(const SecularSystem& sys, std::span<const double> lengths, double lo,
                                        double hi, std::span<const double> flux = {}, double root_tol = 1e-12);

/// f(x) = P cos(kx) + Q sin(kx), x measured from the edge's u end.
struct EdgeMode {
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

struct MetricEigenpair {
  double k = 0.0;
  Eigen::VectorXcd amplitudes;  // incoming bond amplitudes
  std::vector<double> vertex_values;
  std::vector<EdgeMode> edge_modes;
  Genericity status = Genericity::generic;
  double residual = 0.0;  // ||(I - U) a|| / ||a||
  bool generic() const { return status == Genericity::generic; }
};

struct EigenfunctionOptions {
  double null_tol = 1e-7;      // second singular value must exceed this
  double vertex_zero = 1e-6;   // relative to max vertex value
  double continuity_tol = 1e-8;
};

/// Eigenfunction at a simple root, scaled so the largest vertex value is +1.
MetricEigenpair eigenfunction(const MetricGraph& mg, double k, const EigenfunctionOptions& opt = {});

/// Interior zeros of P cos(kx) + Q sin(kx) on (0, length).
int count_edge_zeros(const EdgeMode& mode, double k, double length);

struct MetricNodalEntry {
  int n = 0;
  double k = 0.0;
  int multiplicity = 1;
  Genericity status = Genericity::generic;
  std::optional<NodalCounts> counts;  // sign_changes lists edges carrying zeros
};

struct MetricNodalReport {
  int betti = 0;
  std::vector<MetricNodalEntry> entries;

  std::vector<const MetricNodalEntry*> generic_entries() const;
  /// Largest generic n with phi != nu - 1 + beta, 0 when there is none.
  int observed_n0() const;
};

/// n = 1 is the constant mode at k = 0 (all-Neumann graphs only); each root
/// takes as many indices as its multiplicity.
MetricNodalReport metric_nodal_report(const MetricGraph& mg, std::span<const MetricRoot> roots,
                                      const EigenfunctionOptions& opt = {});

/// Report up to and including the generic_count-th generic entry. k_max
/// starts at a Weyl estimate and grows until enough entries are found.
MetricNodalReport metric_nodal_report_first(const MetricGraph& mg, int generic_count,
                                            const EigenfunctionOptions& opt = {});

/// Nodal counts of a single eigenpair.
NodalCounts metric_nodal_counts(const MetricGraph& mg, const MetricEigenpair& pair, int n);

struct KHessianOptions {
  double step = 1e-3;
  bool richardson = true;
  double gradient_tol = 1e-6;
};

/// Flux Hessian of the root near k0 by re-rooting the secular function.
MagneticHessian k_hessian_fd(const MetricGraph& mg, double k0, const KHessianOptions& opt = {});

/// Root of the secular function at the given flux inside [lo, hi], which
/// must contain exactly one eigenvalue. Bisects to machine precision.
double track_root(const SecularSystem& sys, std::span<const double> lengths, double lo, double hi,
                  std::span<const double> flux);

}  // namespace nodal

#endif  // NODAL_METRIC_HPP
