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

#ifndef NODAL_TORUS_HPP
#define NODAL_TORUS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Dense>

#include "nodal/metric.hpp"

namespace nodal {

using Rational = boost::rational<std::int64_t>;

/// Edge lengths written as rational combinations of generators:
/// length[e] = sum_i coefficients[e][i] * generators[i].
struct LengthDecomposition {
  std::vector<double> generators;
  std::vector<std::vector<Rational>> coefficients;  // edges x generators

  int generator_count() const { return static_cast<int>(generators.size()); }
  int edge_count() const { return static_cast<int>(coefficients.size()); }

  /// The linear length map applied to torus coordinates.
  std::vector<double> lengths_at(std::span<const double> x) const;
  std::vector<double> lengths() const { return lengths_at(generators); }
  /// period[i] = 2 pi * period_factor(i).
  Rational period_factor(int i) const;
  std::vector<double> periods() const;
  /// Coordinates reduced into [0, period).
  std::vector<double> wrap(std::span<const double> x) const;
  /// Max-norm distance between two points on the torus.
  double distance(std::span<const double> x, std::span<const double> y) const;
};

/// Throws InvalidInput on a rank-deficient matrix or non-positive generator.
LengthDecomposition make_decomposition(std::vector<double> generators,
                                       std::vector<std::vector<Rational>> coefficients);

/// Each relation c satisfies sum_e c[e] * lengths[e] = 0. Earlier edges are
/// preferred as generators.
LengthDecomposition decompose_lengths(std::span<const double> lengths,
                                      const std::vector<std::vector<Rational>>& relations,
                                      double consistency_tol = 1e-10);

/// Secular function at k = 1 with lengths given by the torus point x.
double F_on_torus(const SecularSystem& sys, const LengthDecomposition& decomp, std::span<const double> x,
                  std::span<const double> flux = {});

/// Directional derivative of F along d at x (central difference).
double torus_directional_derivative(const SecularSystem& sys, const LengthDecomposition& decomp,
                                    std::span<const double> x, std::span<const double> d, double step = 1e-6);

/// Flux Hessian of F at x (zero flux), central differences with one
/// Richardson level.
Eigen::MatrixXd torus_flux_hessian(const SecularSystem& sys, const LengthDecomposition& decomp,
                                   std::span<const double> x, double step = 1e-3);

/// -H_F / (d . grad F) at x.
MagneticHessian torus_hessian_at(const SecularSystem& sys, const LengthDecomposition& decomp,
                                 std::span<const double> x, std::span<const double> direction);

/// Hessian of the root k with respect to the fluxes, through the torus.
MagneticHessian torus_hessian(const MetricGraph& mg, const LengthDecomposition& decomp, double k_root);

struct SymmetryReport {
  int points = 0;
  double symmetric_residual = 0.0;      // max |F(x;a) - F(-x;-a)| / scale
  double antisymmetric_residual = 0.0;  // max |F(x;a) + F(-x;-a)| / scale
  double tolerance = 0.0;
  bool pass = false;                    // symmetric_residual < tolerance
};

/// Samples x uniformly on the torus and the fluxes on [0, 2 pi). The scale of
/// a sample is max(1, |F(x;a)|, |F(-x;-a)|).
SymmetryReport secular_symmetry(const MetricGraph& mg, const LengthDecomposition& decomp, int points,
                                std::uint64_t seed, double tol = 1e-10);

struct Revisit {
  double k = 0.0;
  double distance = 0.0;  // torus max-norm distance to the target point
  bool generic = false;
  int morse_index = 0;
};

struct RevisitReport {
  double reference_k = 0.0;
  int reference_morse = 0;
  bool mirrored = false;         // targets -k xi instead of k xi
  std::vector<Revisit> revisits;
  bool pass = false;             // all generic, Morse constant (or summing to beta)
};

/// Looks along the flow k xi for roots landing within delta of the reference
/// point (or of its mirror image) until count of them are found.
RevisitReport revisit_analysis(const MetricGraph& mg, const LengthDecomposition& decomp, double reference_k,
                               int count = 10, double delta = 1e-2, bool mirrored = false);

struct SurplusStatistics {
  int betti = 0;
  int requested = 0;
  double k_ceiling = 0.0;
  std::vector<int> counts;       // index = surplus value
  std::vector<int> sample_index; // n of each counted eigenvalue
  std::vector<int> sample_surplus;
  bool pass = false;
  int total() const;
};

/// Surplus histogram over the first N generic eigenvalues with n >= 2.
SurplusStatistics surplus_statistics(const MetricGraph& mg, int N);

}  // namespace nodal

#endif  // NODAL_TORUS_HPP
