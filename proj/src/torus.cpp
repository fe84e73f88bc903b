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

#include "nodal/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "nodal/error.hpp"

namespace nodal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

std::vector<double> LengthDecomposition::lengths_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != generator_count()) {
    throw InvalidInput("torus point has " + std::to_string(x.size()) + " coordinates, expected " +
                       std::to_string(generator_count()));
  }
  std::vector<double> out(edge_count(), 0.0);
  for (int e = 0; e < edge_count(); ++e) {
    for (int i = 0; i < generator_count(); ++i) {
      if (coefficients[e][i].numerator() != 0) out[e] += to_double(coefficients[e][i]) * x[i];
    }
  }
  return out;
}

Rational LengthDecomposition::period_factor(int i) const {
  // smallest q > 0 with q * r[e][i] integral for every edge
  std::int64_t lcm_den = 1;
  for (int e = 0; e < edge_count(); ++e) lcm_den = std::lcm(lcm_den, coefficients[e][i].denominator());
  std::int64_t gcd_num = 0;
  for (int e = 0; e < edge_count(); ++e) {
    Rational scaled = coefficients[e][i] * lcm_den;
    gcd_num = std::gcd(gcd_num, std::abs(scaled.numerator()));
  }
  if (gcd_num == 0) throw InvalidInput("generator " + std::to_string(i + 1) + " appears in no edge length");
  return Rational(lcm_den, gcd_num);
}

std::vector<double> LengthDecomposition::periods() const {
  std::vector<double> out;
  for (int i = 0; i < generator_count(); ++i) out.push_back(kTwoPi * to_double(period_factor(i)));
  return out;
}

std::vector<double> LengthDecomposition::wrap(std::span<const double> x) const {
  std::vector<double> p = periods();
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::fmod(out[i], p[i]);
    if (out[i] < 0.0) out[i] += p[i];
  }
  return out;
}

double LengthDecomposition::distance(std::span<const double> x, std::span<const double> y) const {
  std::vector<double> p = periods();
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double d = std::fmod(std::abs(x[i] - y[i]), p[i]);
    worst = std::max(worst, std::min(d, p[i] - d));
  }
  return worst;
}

LengthDecomposition make_decomposition(std::vector<double> generators,
                                       std::vector<std::vector<Rational>> coefficients) {
  const int I = static_cast<int>(generators.size());
  for (int i = 0; i < I; ++i) {
    if (!(generators[i] > 0.0)) throw InvalidInput("generator " + std::to_string(i + 1) + " must be positive");
  }
  for (const auto& row : coefficients) {
    if (static_cast<int>(row.size()) != I) throw InvalidInput("coefficient row has the wrong number of entries");
  }
  // full column rank over Q
  std::vector<std::vector<Rational>> m = coefficients;
  int rank = 0;
  for (int col = 0; col < I && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r) {
      if (m[r][col].numerator() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < static_cast<int>(m.size()); ++r) {
      Rational factor = m[r][col] / m[rank][col];
      for (int c = col; c < I; ++c) m[r][c] -= factor * m[rank][c];
    }
    ++rank;
  }
  if (rank != I) throw InvalidInput("length coefficients do not have full column rank");
  return {std::move(generators), std::move(coefficients)};
}

LengthDecomposition decompose_lengths(std::span<const double> lengths,
                                      const std::vector<std::vector<Rational>>& relations, double consistency_tol) {
  const int E = static_cast<int>(lengths.size());
  for (int e = 0; e < E; ++e) {
    if (!(lengths[e] > 0.0)) throw InvalidInput("edge " + std::to_string(e + 1) + " has non-positive length");
  }
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const auto& rel = relations[k];
    if (static_cast<int>(rel.size()) != E) {
      throw InvalidInput("relation " + std::to_string(k + 1) + " has " + std::to_string(rel.size()) +
                         " entries, expected " + std::to_string(E));
    }
    double sum = 0.0, size = 0.0;
    for (int e = 0; e < E; ++e) {
      sum += to_double(rel[e]) * lengths[e];
      size += std::abs(to_double(rel[e]) * lengths[e]);
    }
    if (std::abs(sum) > consistency_tol * std::max(size, 1.0)) {
      throw InvalidInput("relation " + std::to_string(k + 1) + " does not hold for the given lengths (residual " +
                         std::to_string(sum) + ")");
    }
  }

  // reduced row echelon form with columns visited from the last edge down,
  // so pivots land on late edges and early edges stay free
  std::vector<std::vector<Rational>> m = relations;
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = E - 1; col >= 0 && row < static_cast<int>(m.size()); --col) {
    int pivot = -1;
    for (int r = row; r < static_cast<int>(m.size()); ++r) {
      if (m[r][col].numerator() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[row], m[pivot]);
    Rational lead = m[row][col];
    for (int c = 0; c < E; ++c) m[row][c] /= lead;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == row || m[r][col].numerator() == 0) continue;
      Rational factor = m[r][col];
      for (int c = 0; c < E; ++c) m[r][c] -= factor * m[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }

  std::vector<int> free_cols;
  for (int e = 0; e < E; ++e) {
    if (std::find(pivot_col.begin(), pivot_col.end(), e) == pivot_col.end()) free_cols.push_back(e);
  }
  const int I = static_cast<int>(free_cols.size());
  if (I == 0) throw InvalidInput("relations force every length to zero");
  std::vector<double> generators;
  for (int e : free_cols) generators.push_back(lengths[e]);
  std::vector<std::vector<Rational>> coeff(E, std::vector<Rational>(I, Rational(0)));
  for (int i = 0; i < I; ++i) coeff[free_cols[i]][i] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) {
    for (int i = 0; i < I; ++i) coeff[pivot_col[r]][i] = -m[r][free_cols[i]];
  }
  LengthDecomposition out = make_decomposition(std::move(generators), std::move(coeff));
  std::vector<double> rebuilt = out.lengths();
  for (int e = 0; e < E; ++e) {
    if (std::abs(rebuilt[e] - lengths[e]) > consistency_tol * std::max(1.0, lengths[e])) {
      throw InvalidInput("relations are inconsistent with the length of edge " + std::to_string(e + 1));
    }
    if (!(rebuilt[e] > 0.0)) throw InvalidInput("decomposition gives a non-positive length");
  }
  return out;
}

double F_on_torus(const SecularSystem& sys, const LengthDecomposition& decomp, std::span<const double> x,
                  std::span<const double> flux) {
  return secular_value(sys, decomp.lengths_at(x), 1.0, flux);
}

double torus_directional_derivative(const SecularSystem& sys, const LengthDecomposition& decomp,
                                    std::span<const double> x, std::span<const double> d, double step) {
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    plus[i] += step * d[i];
    minus[i] -= step * d[i];
  }
  return (F_on_torus(sys, decomp, plus) - F_on_torus(sys, decomp, minus)) / (2.0 * step);
}

Eigen::MatrixXd torus_flux_hessian(const SecularSystem& sys, const LengthDecomposition& decomp,
                                   std::span<const double> x, double step) {
  const int beta = static_cast<int>(sys.chord_bonds.size());
  std::vector<double> lengths = decomp.lengths_at(x);
  auto value = [&](const std::vector<double>& a) { return secular_value(sys, lengths, 1.0, a); };
  const double centre = value(std::vector<double>(beta, 0.0));
  auto stencil = [&](double h) {
    Eigen::MatrixXd out(beta, beta);
    std::vector<double> a(beta, 0.0);
    for (int i = 0; i < beta; ++i) {
      a[i] = h;
      double plus = value(a);
      a[i] = -h;
      double minus = value(a);
      a[i] = 0.0;
      out(i, i) = (plus - 2.0 * centre + minus) / (h * h);
      for (int j = 0; j < i; ++j) {
        double sum = 0.0;
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            a[i] = si * h;
            a[j] = sj * h;
            sum += si * sj * value(a);
          }
        }
        a[i] = a[j] = 0.0;
        out(i, j) = out(j, i) = sum / (4.0 * h * h);
      }
    }
    return out;
  };
  return (4.0 * stencil(0.5 * step) - stencil(step)) / 3.0;
}

MagneticHessian torus_hessian_at(const SecularSystem& sys, const LengthDecomposition& decomp,
                                 std::span<const double> x, std::span<const double> direction) {
  const int beta = static_cast<int>(sys.chord_bonds.size());
  if (beta == 0) return classify_hessian(0, Eigen::MatrixXd(0, 0));
  double slope = torus_directional_derivative(sys, decomp, x, direction);
  if (std::abs(slope) < 1e-12) {
    throw NonGenericError("secular function has vanishing slope along the flow");
  }
  return classify_hessian(0, -torus_flux_hessian(sys, decomp, x) / slope);
}

MagneticHessian torus_hessian(const MetricGraph& mg, const LengthDecomposition& decomp, double k_root) {
  std::vector<double> rebuilt = decomp.lengths();
  for (std::size_t e = 0; e < rebuilt.size(); ++e) {
    if (std::abs(rebuilt[e] - mg.lengths()[e]) > 1e-12 * std::max(1.0, mg.lengths()[e])) {
      throw InvalidInput("decomposition does not reproduce the metric graph lengths");
    }
  }
  SecularSystem sys = secular_system(mg);
  std::vector<double> x;
  for (double xi : decomp.generators) x.push_back(k_root * xi);
  return torus_hessian_at(sys, decomp, x, decomp.generators);
}

namespace {

bool generic_root(const MetricGraph& mg, double k) {
  try {
    return eigenfunction(mg, k).generic();
  } catch (const NonGenericError&) {
    return false;
  }
}

}  // namespace

SymmetryReport secular_symmetry(const MetricGraph& mg, const LengthDecomposition& decomp, int points,
                                std::uint64_t seed, double tol) {
  if (points < 1) throw InvalidInput("points must be positive");
  SecularSystem sys = secular_system(mg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> periods = decomp.periods();
  const int beta = mg.betti();
  std::vector<double> x(periods.size()), neg_x(periods.size()), flux(beta), neg_flux(beta);
  SymmetryReport report;
  report.points = points;
  report.tolerance = tol;
  for (int p = 0; p < points; ++p) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = periods[i] * unit(rng);
      neg_x[i] = -x[i];
    }
    for (int i = 0; i < beta; ++i) {
      flux[i] = 2.0 * std::numbers::pi * unit(rng);
      neg_flux[i] = -flux[i];
    }
    double f = F_on_torus(sys, decomp, x, flux);
    double g = F_on_torus(sys, decomp, neg_x, neg_flux);
    double scale = std::max({1.0, std::abs(f), std::abs(g)});
    report.symmetric_residual = std::max(report.symmetric_residual, std::abs(f - g) / scale);
    report.antisymmetric_residual = std::max(report.antisymmetric_residual, std::abs(f + g) / scale);
  }
  report.pass = report.symmetric_residual < tol;
  return report;
}

RevisitReport revisit_analysis(const MetricGraph& mg, const LengthDecomposition& decomp, double reference_k,
                               int count, double delta, bool mirrored) {
  SecularSystem sys = secular_system(mg);
  const int I = decomp.generator_count();
  const std::vector<double>& xi = decomp.generators;
  const std::vector<double> periods = decomp.periods();

  RevisitReport report;
  report.reference_k = reference_k;
  report.mirrored = mirrored;
  report.reference_morse = torus_hessian(mg, decomp, reference_k).morse_index;

  std::vector<double> target(I);
  for (int i = 0; i < I; ++i) target[i] = (mirrored ? -1.0 : 1.0) * reference_k * xi[i];
  target = decomp.wrap(target);

  // walk through the times where the first coordinate matches the target
  const double window = delta / xi[0];
  std::vector<double> point(I);
  const long max_steps = 20000000;
  for (long m = 0; m < max_steps && static_cast<int>(report.revisits.size()) < count; ++m) {
    double k = (target[0] + m * periods[0]) / xi[0];
    if (k - window <= 0.0) continue;
    if (std::abs(k - reference_k) < 2.0 * window) continue;
    for (int i = 0; i < I; ++i) point[i] = k * xi[i];
    if (decomp.distance(point, target) >= delta) continue;
    for (const MetricRoot& root : roots_in_window(sys, mg.lengths(), k - window, k + window)) {
      for (int i = 0; i < I; ++i) point[i] = root.k * xi[i];
      double d = decomp.distance(point, target);
      if (d >= delta || std::abs(root.k - reference_k) < 1e-9) continue;
      Revisit visit{root.k, d, root.simple() && generic_root(mg, root.k), 0};
      if (visit.generic) visit.morse_index = torus_hessian(mg, decomp, root.k).morse_index;
      report.revisits.push_back(visit);
      if (static_cast<int>(report.revisits.size()) == count) break;
    }
  }
  if (static_cast<int>(report.revisits.size()) < count) {
    throw ConvergenceError("found only " + std::to_string(report.revisits.size()) + " revisits of k = " +
                           std::to_string(reference_k));
  }
  const int beta = mg.betti();
  report.pass = std::all_of(report.revisits.begin(), report.revisits.end(), [&](const Revisit& r) {
    int expected = mirrored ? beta - report.reference_morse : report.reference_morse;
    return r.generic && r.morse_index == expected;
  });
  return report;
}

int SurplusStatistics::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

SurplusStatistics surplus_statistics(const MetricGraph& mg, int N) {
  if (N < 1) throw InvalidInput("N must be positive");
  const double total_length = mg.total_length();
  const int beta = mg.betti();
  SurplusStatistics stats;
  stats.betti = beta;
  stats.requested = N;
  stats.k_ceiling = std::numbers::pi * (N + mg.graph().vertex_count() + beta + 2) / total_length;

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<MetricRoot> roots = k_spectrum(mg, stats.k_ceiling);
    MetricNodalReport report = metric_nodal_report(mg, roots);
    stats.counts.assign(beta + 1, 0);
    stats.sample_index.clear();
    stats.sample_surplus.clear();
    for (const MetricNodalEntry& entry : report.entries) {
      if (entry.n < 2 || !entry.counts) continue;
      if (static_cast<int>(stats.sample_index.size()) == N) break;
      int s = entry.counts->surplus;
      if (s < 0 || s > beta) throw ConvergenceError("surplus out of range at n = " + std::to_string(entry.n));
      ++stats.counts[s];
      stats.sample_index.push_back(entry.n);
      stats.sample_surplus.push_back(s);
    }
    int found = static_cast<int>(stats.sample_index.size());
    if (found == N) break;
    if (attempt == 1) {
      throw ConvergenceError("only " + std::to_string(found) + " generic eigenvalues below k = " +
                             std::to_string(stats.k_ceiling));
    }
    stats.k_ceiling *= 1.25 * N / std::max(found, 1) + 0.1;
  }

  int distinct = 0;
  bool symmetric = true;
  for (int s = 0; s <= beta; ++s) {
    if (stats.counts[s] == 0) continue;
    ++distinct;
    if (stats.counts[beta - s] == 0) symmetric = false;
  }
  stats.pass = symmetric && (beta == 0 || distinct > 1);
  return stats;
}

}  // namespace nodal
