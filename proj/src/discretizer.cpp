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

#include "nodal/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nodal/error.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;

using RationalMatrix = std::vector<std::vector<Rational>>;

bool is_zero(const Rational& r) { return r.numerator() == 0; }

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Rows of r forming an invertible square block, chosen greedily.
std::vector<int> independent_rows(const LengthDecomposition& decomp) {
  const int I = decomp.generator_count();
  std::vector<int> chosen;
  RationalMatrix basis;  // echelon rows of the chosen set
  std::vector<int> lead;
  for (int e = 0; e < decomp.edge_count() && static_cast<int>(chosen.size()) < I; ++e) {
    std::vector<Rational> row = decomp.coefficients[e];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (is_zero(row[lead[b]])) continue;
      Rational factor = row[lead[b]] / basis[b][lead[b]];
      for (int c = 0; c < I; ++c) row[c] -= factor * basis[b][c];
    }
    auto it = std::find_if(row.begin(), row.end(), [](const Rational& v) { return !is_zero(v); });
    if (it == row.end()) continue;
    lead.push_back(static_cast<int>(it - row.begin()));
    basis.push_back(row);
    chosen.push_back(e);
  }
  return chosen;
}

RationalMatrix invert(RationalMatrix m) {
  const int n = static_cast<int>(m.size());
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && is_zero(m[pivot][col])) ++pivot;
    if (pivot == n) throw InvalidInput("coefficient block is singular");
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    Rational lead = m[col][col];
    for (int c = 0; c < n; ++c) {
      m[col][c] /= lead;
      inv[col][c] /= lead;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || is_zero(m[r][col])) continue;
      Rational factor = m[r][col];
      for (int c = 0; c < n; ++c) {
        m[r][c] -= factor * m[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

// Scans j_B over [1, bound]^I; calls visit(j) for every admissible full vector.
template <class Visit>
void scan_lattice(const LengthDecomposition& decomp, const RationalMatrix& inverse, int bound, Visit&& visit) {
  const int I = decomp.generator_count();
  const int E = decomp.edge_count();
  std::vector<int> jb(I, 1);
  std::vector<Rational> x(I);
  std::vector<int> full(E);
  while (true) {
    for (int i = 0; i < I; ++i) {
      x[i] = 0;
      for (int c = 0; c < I; ++c) x[i] += inverse[i][c] * jb[c];
    }
    bool ok = true;
    for (int e = 0; e < E && ok; ++e) {
      Rational v(0);
      for (int i = 0; i < I; ++i) v += decomp.coefficients[e][i] * x[i];
      if (v.denominator() != 1 || v.numerator() < 1 || v.numerator() > bound) ok = false;
      else full[e] = static_cast<int>(v.numerator());
    }
    if (ok && !visit(full)) return;
    int pos = I - 1;
    while (pos >= 0 && jb[pos] == bound) jb[pos--] = 1;
    if (pos < 0) return;
    ++jb[pos];
  }
}

}  // namespace

Eigen::MatrixXd transition_matrix(const Graph& g) {
  const int V = g.vertex_count();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(V, V);
  for (const Edge& e : g.edges()) {
    p(e.u, e.v) = 1.0 / g.degree(e.u);
    p(e.v, e.u) = 1.0 / g.degree(e.v);
  }
  return p;
}

std::optional<std::vector<Rational>> length_preimage(const LengthDecomposition& decomp,
                                                     std::span<const int> counts) {
  const int I = decomp.generator_count();
  const int E = decomp.edge_count();
  if (static_cast<int>(counts.size()) != E) {
    throw InvalidInput("expected " + std::to_string(E) + " edge counts, got " + std::to_string(counts.size()));
  }
  RationalMatrix m(E, std::vector<Rational>(I + 1));
  for (int e = 0; e < E; ++e) {
    for (int i = 0; i < I; ++i) m[e][i] = decomp.coefficients[e][i];
    m[e][I] = counts[e];
  }
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < I && row < E; ++col) {
    int pivot = row;
    while (pivot < E && is_zero(m[pivot][col])) ++pivot;
    if (pivot == E) continue;
    std::swap(m[row], m[pivot]);
    Rational lead = m[row][col];
    for (int c = 0; c <= I; ++c) m[row][c] /= lead;
    for (int r = 0; r < E; ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      Rational factor = m[r][col];
      for (int c = 0; c <= I; ++c) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  for (int r = row; r < E; ++r) {
    if (!is_zero(m[r][I])) return std::nullopt;
  }
  std::vector<Rational> x(I, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][I];
  return x;
}

DiscretizedVersion discretize(const Graph& g, const LengthDecomposition& decomp, std::vector<int> counts) {
  if (decomp.edge_count() != g.edge_count()) throw InvalidInput("decomposition does not match the graph");
  for (int c : counts) {
    if (c < 1) throw InvalidInput("edge counts must be positive integers");
  }
  if (!length_preimage(decomp, counts)) {
    throw InvalidInput("edge counts are not in the image of the length map");
  }
  Subdivision sub = subdivide(g, counts);
  MetricGraph unit = equilateral(sub.graph);
  return {std::move(counts), std::move(sub), std::move(unit)};
}

DiscretizationList enumerate_discretizations(const LengthDecomposition& decomp, int bound) {
  if (bound < 1) throw InvalidInput("bound must be positive");
  const std::vector<int> block = independent_rows(decomp);
  RationalMatrix square;
  for (int e : block) square.push_back(decomp.coefficients[e]);
  const RationalMatrix inverse = invert(square);

  DiscretizationList out;
  scan_lattice(decomp, inverse, bound, [&](const std::vector<int>& j) {
    out.counts.push_back(j);
    return true;
  });
  std::sort(out.counts.begin(), out.counts.end());
  if (out.counts.empty()) {
    // grow the box until something fits, within a work budget
    const int I = decomp.generator_count();
    for (int b = bound + 1; b <= 100000; ++b) {
      if (std::pow(static_cast<double>(b), I) > 2e7) break;
      bool found = false;
      scan_lattice(decomp, inverse, b, [&](const std::vector<int>&) {
        found = true;
        return false;
      });
      if (found) {
        out.minimal_bound = b;
        break;
      }
    }
  }
  return out;
}

std::vector<BranchValue> arccos_branches(double mu, int p_max) {
  if (!(mu > 0.0 && mu < 2.0)) {
    throw InvalidInput("arccos branches need 0 < mu < 2, got " + std::to_string(mu));
  }
  const double a = std::acos(1.0 - mu);
  std::vector<BranchValue> out;
  for (int p = 0; p <= p_max; ++p) {
    double k = p % 2 == 0 ? p * kPi + a : (p + 1) * kPi - a;
    out.push_back({p, k});
  }
  return out;
}

namespace {

bool outside_endpoints(double mu) { return mu > 1e-9 && mu < 2.0 - 1e-9; }

double nearest_root_distance(std::span<const MetricRoot> roots, double k) {
  double best = std::numeric_limits<double>::infinity();
  for (const MetricRoot& r : roots) best = std::min(best, std::abs(r.k - k));
  return best;
}

// Max deviation after scaling both vectors to 1 at the trace's pivot.
double lift_mismatch(const std::vector<double>& trace, const Eigen::VectorXd& lifted) {
  int pivot = 0;
  for (int v = 1; v < static_cast<int>(trace.size()); ++v) {
    if (std::abs(trace[v]) > std::abs(trace[pivot])) pivot = v;
  }
  double worst = 0.0;
  for (int v = 0; v < static_cast<int>(trace.size()); ++v) {
    worst = std::max(worst, std::abs(trace[v] / trace[pivot] - lifted(v) / lifted(pivot)));
  }
  return worst;
}

}  // namespace

EquilateralReport verify_equilateral_connection(const Graph& g, const EquilateralOptions& opt) {
  DiscreteOperator op = build_normalized(g);
  DiscreteSpectrum spectrum = eigensystem(op.base);
  MetricGraph mg = equilateral(g);

  EquilateralReport report;
  report.k_ceiling = (opt.p_max + 1) * kPi - 1e-4;
  std::vector<MetricRoot> roots = k_spectrum(mg, report.k_ceiling);

  std::vector<double> all_branches;
  for (int n = 1; n <= spectrum.size(); ++n) {
    double mu = spectrum.lambda(n);
    if (!outside_endpoints(mu)) continue;
    for (const BranchValue& b : arccos_branches(mu, opt.p_max)) {
      all_branches.push_back(b.k);
      if (nearest_root_distance(roots, b.k) > opt.root_tol) report.branch_roots = false;
    }
  }

  for (const MetricRoot& r : roots) {
    int hits = 0;
    for (double b : all_branches) {
      if (std::abs(b - r.k) < opt.root_tol) ++hits;
    }
    if (hits > 0) {
      if (hits != r.multiplicity) report.multiplicity_check = false;
      continue;
    }
    if (std::abs(r.k - kPi * std::round(r.k / kPi)) > opt.root_tol) {
      report.dirichlet_check = false;
      report.unexplained_roots.push_back(r.k);
    }
  }

  Eigen::VectorXd degree(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) degree(v) = g.degree(v);
  for (int n = 1; n <= spectrum.size(); ++n) {
    double mu = spectrum.lambda(n);
    if (!spectrum.generic(n) || !outside_endpoints(mu)) {
      report.skipped.push_back({n, spectrum.status[n - 1]});
      continue;
    }
    MuCheck check;
    check.index = n;
    check.mu = mu;
    check.status = spectrum.status[n - 1];
    Eigen::VectorXd f = spectrum.vector(n);
    Eigen::VectorXd lift = f.cwiseQuotient(degree.cwiseSqrt());
    Eigen::VectorXd scaled = f.cwiseProduct(degree.cwiseSqrt());
    bool roots_ok = true;
    for (const BranchValue& b : arccos_branches(mu, opt.p_max)) {
      double distance = nearest_root_distance(roots, b.k);
      bool is_root = distance <= opt.root_tol;
      roots_ok = roots_ok && is_root;
      check.branches.push_back({b.p, b.k, is_root, distance});
      MetricEigenpair pair = eigenfunction(mg, b.k);
      check.lift_error = std::max(check.lift_error, lift_mismatch(pair.vertex_values, lift));
      check.scaled_lift_error = std::max(check.scaled_lift_error, lift_mismatch(pair.vertex_values, scaled));
    }
    check.pass = roots_ok && check.lift_error <= opt.lift_tol;
    report.trace_lift_check = report.trace_lift_check && check.lift_error <= opt.lift_tol;
    report.scaled_lift_check = report.scaled_lift_check && check.scaled_lift_error <= opt.lift_tol;
    report.checks.push_back(std::move(check));
  }
  return report;
}

SurplusTransferReport verify_surplus_transfer(const Graph& g, int p_max) {
  SurplusTransferReport report;
  report.betti = g.betti_number();
  if (report.betti == 0) {
    report.vacuous = true;
    report.vacuous_reason = "graph is a tree";
    report.pass = true;
    return report;
  }
  DiscreteOperator op = build_normalized(g);
  DiscreteSpectrum spectrum = eigensystem(op.base);
  NodalReport discrete = nodal_report(op, spectrum);

  std::vector<int> usable;
  for (int n = 1; n <= spectrum.size(); ++n) {
    if (spectrum.generic(n) && outside_endpoints(spectrum.lambda(n))) usable.push_back(n);
    else report.skipped.push_back({n, spectrum.status[n - 1]});
  }
  if (usable.empty()) {
    report.vacuous = true;
    report.vacuous_reason = "no generic eigenvalue outside {0, 2}";
    report.pass = true;
    return report;
  }

  MetricGraph mg = equilateral(g);
  const double ceiling = (p_max + 1) * kPi - 1e-4;
  std::vector<MetricRoot> roots = k_spectrum(mg, ceiling);
  MetricNodalReport metric = metric_nodal_report(mg, roots);

  report.pass = true;
  for (int n : usable) {
    TransferEntry entry;
    entry.index = n;
    entry.mu = spectrum.lambda(n);
    entry.sigma_discrete = discrete.entries[n - 1].counts->surplus;
    entry.morse_discrete = hessian_perturbative(op, spectrum, n).morse_index;
    entry.pass = true;
    for (const BranchValue& b : arccos_branches(entry.mu, p_max)) {
      TransferBranch branch;
      branch.p = b.p;
      branch.k = b.k;
      const bool even = b.p % 2 == 0;
      branch.expected_sigma = even ? entry.sigma_discrete : report.betti - entry.sigma_discrete;
      branch.expected_morse = even ? entry.morse_discrete : report.betti - entry.morse_discrete;
      for (const MetricNodalEntry& m : metric.entries) {
        if (std::abs(m.k - b.k) < 1e-8 && m.counts) {
          branch.n_metric = m.n;
          branch.sigma_metric = m.counts->surplus;
        }
      }
      branch.morse = k_hessian_fd(mg, b.k).morse_index;
      const double h = 1e-6;
      double forward = arccos_branches(entry.mu + h, p_max)[b.p].k;
      double backward = arccos_branches(entry.mu - h, p_max)[b.p].k;
      branch.derivative_sign = forward > backward ? 1 : -1;
      branch.pass = branch.sigma_metric == branch.expected_sigma && branch.morse == branch.expected_morse &&
                    branch.derivative_sign == (even ? 1 : -1);
      entry.pass = entry.pass && branch.pass;
      entry.branches.push_back(branch);
    }
    report.pass = report.pass && entry.pass;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

DirectionalReport directional_derivative_sign_check(const MetricGraph& mg, const LengthDecomposition& decomp,
                                                    std::span<const int> counts,
                                                    std::span<const MetricRoot> roots) {
  std::optional<std::vector<Rational>> pre = length_preimage(decomp, counts);
  if (!pre) throw InvalidInput("edge counts are not in the image of the length map");
  const int I = decomp.generator_count();
  std::vector<double> y(I);
  for (int i = 0; i < I; ++i) y[i] = to_double((*pre)[i]);
  SecularSystem sys = secular_system(mg);

  DirectionalReport report;
  for (const MetricRoot& root : roots) {
    if (!root.simple()) continue;
    DirectionalCheck check;
    check.k = root.k;
    std::vector<double> x(I), d(I);
    for (int i = 0; i < I; ++i) x[i] = root.k * decomp.generators[i];
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (int i = 0; i < I; ++i) d[i] = t * y[i] + (1.0 - t) * decomp.generators[i];
      check.derivatives.push_back(torus_directional_derivative(sys, decomp, x, d));
    }
    const double first = check.derivatives.front();
    check.pass = std::all_of(check.derivatives.begin(), check.derivatives.end(),
                             [&](double v) { return v != 0.0 && (v > 0.0) == (first > 0.0); });
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace nodal
