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

#include "nodal/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nodal/error.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// An eigenphase this close to 0 (mod 2 pi) makes the count ambiguous.
constexpr double kPhaseGuard = 1e-12;

}  // namespace

MetricGraph::MetricGraph(Graph graph, std::vector<double> lengths, std::vector<VertexCondition> conditions)
    : graph_(std::move(graph)), lengths_(std::move(lengths)), conditions_(std::move(conditions)) {
  if (static_cast<int>(lengths_.size()) != graph_.edge_count()) {
    throw InvalidInput("expected " + std::to_string(graph_.edge_count()) + " edge lengths, got " +
                       std::to_string(lengths_.size()));
  }
  for (std::size_t e = 0; e < lengths_.size(); ++e) {
    if (!(lengths_[e] > 0.0) || !std::isfinite(lengths_[e])) {
      throw InvalidInput("edge " + std::to_string(e + 1) + " has non-positive length " +
                         std::to_string(lengths_[e]));
    }
  }
  if (conditions_.empty()) conditions_.assign(graph_.vertex_count(), VertexCondition::neumann);
  if (static_cast<int>(conditions_.size()) != graph_.vertex_count()) {
    throw InvalidInput("expected " + std::to_string(graph_.vertex_count()) + " vertex conditions, got " +
                       std::to_string(conditions_.size()));
  }
}

double MetricGraph::total_length() const {
  double sum = 0.0;
  for (double l : lengths_) sum += l;
  return sum;
}

bool MetricGraph::all_neumann() const {
  return std::all_of(conditions_.begin(), conditions_.end(),
                     [](VertexCondition c) { return c == VertexCondition::neumann; });
}

MetricGraph equilateral(const Graph& g, double length) {
  return MetricGraph(g, std::vector<double>(g.edge_count(), length));
}

SecularSystem secular_system(const Graph& g, std::span<const VertexCondition> conditions) {
  const int B = g.bond_count();
  SecularSystem sys{g, Eigen::MatrixXd::Zero(B, B), {}, 1, {1.0, 0.0}};
  // S(b, b') couples the incoming bond b' to the outgoing bond b at the
  // vertex where b' ends and b starts.
  for (int out = 0; out < B; ++out) {
    const int v = g.bond(out).from;
    const bool dirichlet = !conditions.empty() && conditions[v] == VertexCondition::dirichlet;
    const double transmission = dirichlet ? 0.0 : 2.0 / g.degree(v);
    for (int in = 0; in < B; ++in) {
      if (g.bond(in).to != v) continue;
      sys.scattering(out, in) = transmission - (in == g.reverse_bond(out) ? 1.0 : 0.0);
    }
  }
  for (int chord : cycle_basis(g).chords) sys.chord_bonds.push_back(chord);
  double det = sys.scattering.determinant();
  sys.scattering_det_sign = det > 0.0 ? 1 : -1;
  sys.det_root = sys.scattering_det_sign > 0 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
  return sys;
}

SecularSystem secular_system(const MetricGraph& mg) { return secular_system(mg.graph(), mg.conditions()); }

Eigen::MatrixXcd SecularSystem::propagator(std::span<const double> lengths, double k,
                                           std::span<const double> flux) const {
  const int E = graph.edge_count();
  if (static_cast<int>(lengths.size()) != E) throw InvalidInput("length vector has the wrong size");
  if (!flux.empty() && flux.size() != chord_bonds.size()) {
    throw InvalidInput("flux vector has " + std::to_string(flux.size()) + " entries, graph has beta = " +
                       std::to_string(chord_bonds.size()));
  }
  Eigen::VectorXd phase(2 * E);
  for (int e = 0; e < E; ++e) phase(e) = phase(e + E) = k * lengths[e];
  for (std::size_t i = 0; i < flux.size(); ++i) {
    phase(chord_bonds[i]) += flux[i];
    phase(chord_bonds[i] + E) -= flux[i];
  }
  Eigen::MatrixXcd u(2 * E, 2 * E);
  for (int b = 0; b < 2 * E; ++b) {
    u.row(b) = std::polar(1.0, phase(b)) * scattering.row(b).cast<std::complex<double>>();
  }
  return u;
}

double secular_value(const SecularSystem& sys, std::span<const double> lengths, double k,
                     std::span<const double> flux) {
  const int B = sys.bonds();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(B, B) - sys.propagator(lengths, k, flux);
  std::complex<double> det = m.partialPivLu().determinant();
  double total = 0.0;
  for (double l : lengths) total += l;
  std::complex<double> value = std::polar(1.0, -k * total) * det / sys.det_root;
  double hadamard = 1.0;
  for (int c = 0; c < B; ++c) hadamard *= m.col(c).norm();
  if (std::abs(value.imag()) > 1e-9 * hadamard) {
    throw ConvergenceError("secular function has imaginary residue " + std::to_string(value.imag()) +
                           " at k = " + std::to_string(k));
  }
  return value.real();
}

double secular_value(const MetricGraph& mg, double k, std::span<const double> flux) {
  return secular_value(secular_system(mg), mg.lengths(), k, flux);
}

namespace {

double wrapped_phase(std::complex<double> z) {
  double phi = std::arg(z);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

// Sum of eigenphases in [0, 2 pi); nullopt when one sits on the cut.
std::optional<double> phase_sum(const Eigen::MatrixXcd& u, bool snap_to_zero) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eigenphase computation did not converge");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
    double phi = wrapped_phase(solver.eigenvalues()(j));
    double to_cut = std::min(phi, kTwoPi - phi);
    if (to_cut < (snap_to_zero ? 1e-9 : kPhaseGuard)) {
      if (!snap_to_zero) return std::nullopt;
      phi = 0.0;
    }
    sum += phi;
  }
  return sum;
}

}  // namespace

std::optional<int> counting_function(const SecularSystem& sys, std::span<const double> lengths, double k,
                                     std::span<const double> flux) {
  if (k <= 0.0) return 0;
  double total = 0.0;
  for (double l : lengths) total += l;
  double at_zero = *phase_sum(sys.propagator(lengths, 0.0, flux), true);
  std::optional<double> at_k = phase_sum(sys.propagator(lengths, k, flux), false);
  if (!at_k) return std::nullopt;
  double count = (2.0 * k * total + at_zero - *at_k) / kTwoPi;
  double rounded = std::round(count);
  if (std::abs(count - rounded) > 1e-6) {
    throw ConvergenceError("eigenphase count is not an integer (" + std::to_string(count) + ")");
  }
  return static_cast<int>(rounded);
}

namespace {

struct Scanner {
  const SecularSystem& sys;
  std::span<const double> lengths;
  std::span<const double> flux;
  double phase_at_zero = 0.0;
  double total = 0.0;
  const KSpectrumOptions& opt;
  std::vector<MetricRoot> roots;
  bool inconsistent = false;

  double value(double k) const { return secular_value(sys, lengths, k, flux); }

  std::optional<int> count(double k) const {
    std::optional<double> at_k = phase_sum(sys.propagator(lengths, k, flux), false);
    if (!at_k) return std::nullopt;
    double c = (2.0 * k * total + phase_at_zero - *at_k) / kTwoPi;
    double rounded = std::round(c);
    if (std::abs(c - rounded) > 1e-6) {
      throw ConvergenceError("eigenphase count is not an integer (" + std::to_string(c) + ")");
    }
    return static_cast<int>(rounded);
  }

  // Count at a point near k inside (lo, hi), nudging off eigenvalues.
  std::optional<std::pair<double, int>> count_near(double k, double lo, double hi) const {
    for (double t : {0.0, 1e-3, -1e-3, 1e-2, -1e-2, 0.1, -0.1}) {
      double x = k + t * (hi - lo);
      if (x <= lo || x >= hi) continue;
      if (auto c = count(x)) return std::pair{x, *c};
    }
    return std::nullopt;
  }

  void bisect(double lo, double hi, double f_lo) {
    while (hi - lo > opt.root_tol) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double f_mid = value(mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    roots.push_back({0.5 * (lo + hi), 1});
  }

  void resolve(double lo, double hi, int n_lo, int n_hi, int depth) {
    const int c = n_hi - n_lo;
    if (c < 0) {
      inconsistent = true;
      return;
    }
    if (c == 0) return;
    if (c == 1) {
      double f_lo = value(lo), f_hi = value(hi);
      if ((f_lo < 0.0) != (f_hi < 0.0)) {
        bisect(lo, hi, f_lo);
        return;
      }
    }
    double width = hi - lo;
    double floor_width = std::max(opt.root_tol, 4.0 * std::numeric_limits<double>::epsilon() * hi);
    if (width <= floor_width || depth > 200) {
      if (c == 1) {
        // even sign pattern from rounding at the bisection floor
        roots.push_back({0.5 * (lo + hi), 1});
        return;
      }
      roots.push_back({0.5 * (lo + hi), c});
      return;
    }
    auto probe = count_near(0.5 * (lo + hi), lo, hi);
    if (!probe) {
      // the whole interval is within rounding of the eigenvalue
      roots.push_back({0.5 * (lo + hi), c});
      return;
    }
    auto [mid, n_mid] = *probe;
    resolve(lo, mid, n_lo, n_mid, depth + 1);
    resolve(mid, hi, n_mid, n_hi, depth + 1);
  }
};

}  // namespace

std::vector<MetricRoot> k_spectrum(const MetricGraph& mg, double k_max, std::span<const double> flux,
                                   const KSpectrumOptions& opt) {
  if (!(k_max > 0.0)) throw InvalidInput("k_max must be positive");
  SecularSystem sys = secular_system(mg);
  const double total = mg.total_length();
  const double base_step = kPi / (20.0 * total);

  for (int refinement = 0; refinement <= opt.max_refinements; ++refinement) {
    Scanner scan{sys, mg.lengths(), flux, *phase_sum(sys.propagator(mg.lengths(), 0.0, flux), true), total, opt,
                 {}, false};
    const double step = base_step / std::pow(2.0, refinement);
    const int samples = static_cast<int>(std::ceil(k_max / step));

    double lo = 1e-7 * step;
    auto first = scan.count(lo);
    if (!first || *first != 0) throw ConvergenceError("eigenvalue too close to k = 0");
    int n_lo = 0;
    // k_max itself must be evaluated exactly so roots at k_max are kept
    for (int i = 1; i <= samples && !scan.inconsistent; ++i) {
      double hi = i == samples ? k_max : i * step;
      int n_hi = 0;
      if (i == samples) {
        auto c = scan.count(hi);
        if (!c) {
          // k_max sits on an eigenvalue: step just past it
          auto past = scan.count(hi + 1e-9 * step);
          if (!past) throw ConvergenceError("cannot evaluate the eigenvalue count at k_max");
          scan.resolve(lo, hi + 1e-9 * step, n_lo, *past, 0);
          break;
        }
        n_hi = *c;
      } else {
        auto probe = scan.count_near(hi, lo, hi + step);
        if (!probe) throw ConvergenceError("cannot evaluate the eigenvalue count near k = " + std::to_string(hi));
        hi = probe->first;
        n_hi = probe->second;
      }
      scan.resolve(lo, hi, n_lo, n_hi, 0);
      lo = hi;
      n_lo = n_hi;
    }
    if (scan.inconsistent) continue;

    std::sort(scan.roots.begin(), scan.roots.end(),
              [](const MetricRoot& a, const MetricRoot& b) { return a.k < b.k; });
    std::vector<MetricRoot> roots;
    for (const MetricRoot& r : scan.roots) {
      if (r.k <= k_max) roots.push_back(r);
    }
    if (opt.weyl_check) {
      int count = 0;
      for (const MetricRoot& r : roots) count += r.multiplicity;
      const double weyl = k_max * total / kPi;
      const int slack = mg.graph().vertex_count() + mg.betti() + 2;
      if (std::abs(count - weyl) > slack) {
        throw ConvergenceError("root count " + std::to_string(count) + " is outside the Weyl window around " +
                               std::to_string(weyl));
      }
    }
    return roots;
  }
  throw ConvergenceError("root scan stayed inconsistent after " + std::to_string(opt.max_refinements) +
                         " refinements");
}

std::vector<MetricRoot> roots_in_window(const SecularSystem& sys, std::span<const double> lengths, double lo,
                                        double hi, std::span<const double> flux, double root_tol) {
  if (!(hi > lo) || !(lo >= 0.0)) throw InvalidInput("root window must satisfy 0 <= lo < hi");
  KSpectrumOptions opt;
  opt.root_tol = root_tol;
  double total = 0.0;
  for (double l : lengths) total += l;
  Scanner scan{sys, lengths, flux, *phase_sum(sys.propagator(lengths, 0.0, flux), true), total, opt, {}, false};
  const double width = hi - lo;
  auto edge_count = [&](double k, double toward) -> std::pair<double, int> {
    if (k == 0.0) return {0.0, 0};
    for (double t : {0.0, 1e-9, 1e-7, 1e-5}) {
      double x = k + t * width * toward;
      if (auto c = scan.count(x)) return {x, *c};
    }
    throw ConvergenceError("cannot evaluate the eigenvalue count near k = " + std::to_string(k));
  };
  auto [a, n_a] = edge_count(lo, 1.0);
  auto [b, n_b] = edge_count(hi, 1.0);
  // sub-sample at the scan density so sign changes are bracketed
  const double step = kPi / (20.0 * total);
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
  double left = a;
  int n_left = n_a;
  for (int i = 1; i <= pieces && !scan.inconsistent; ++i) {
    double right = i == pieces ? b : a + i * (b - a) / pieces;
    int n_right = n_b;
    if (i < pieces) {
      auto probe = scan.count_near(right, left, b);
      if (!probe) throw ConvergenceError("cannot evaluate the eigenvalue count near k = " + std::to_string(right));
      right = probe->first;
      n_right = probe->second;
    }
    scan.resolve(left, right, n_left, n_right, 0);
    left = right;
    n_left = n_right;
  }
  if (scan.inconsistent) throw ConvergenceError("inconsistent eigenvalue count in root window");
  std::sort(scan.roots.begin(), scan.roots.end(),
            [](const MetricRoot& x, const MetricRoot& y) { return x.k < y.k; });
  return scan.roots;
}

MetricEigenpair eigenfunction(const MetricGraph& mg, double k, const EigenfunctionOptions& opt) {
  const SecularSystem sys = secular_system(mg);
  const Graph& g = mg.graph();
  const int E = g.edge_count();
  const int B = 2 * E;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(B, B) - sys.propagator(mg.lengths(), k, {});
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (B > 1 && sv(B - 2) < opt.null_tol) {
    throw NonGenericError("eigenvalue at k = " + std::to_string(k) + " is not simple");
  }

  MetricEigenpair pair;
  pair.k = k;
  Eigen::VectorXcd a = svd.matrixV().col(B - 1);
  pair.residual = (m * a).norm() / a.norm();
  if (pair.residual > 1e-8) {
    throw ConvergenceError("k = " + std::to_string(k) + " is not a root (residual " +
                           std::to_string(pair.residual) + ")");
  }
  Eigen::VectorXcd w = sys.scattering.cast<std::complex<double>>() * a;

  // value of f at the start vertex of each bond
  auto start_value = [&](int b) { return w(b) + a(g.reverse_bond(b)); };
  auto first_bond = [&](int v) {
    const Incidence& inc = g.incident(v).front();
    return g.edge(inc.edge).u == v ? inc.edge : inc.edge + E;
  };
  const std::complex<double> I1(0.0, 1.0);

  // global phase: the largest vertex value, or the largest edge coefficient
  // when the eigenfunction vanishes on every vertex
  double edge_size = 0.0, vertex_size = 0.0;
  std::complex<double> edge_pivot, vertex_pivot;
  for (int e = 0; e < E; ++e) {
    for (std::complex<double> c : {w(e) + a(e + E), I1 * (w(e) - a(e + E))}) {
      if (std::abs(c) > edge_size) {
        edge_size = std::abs(c);
        edge_pivot = c;
      }
    }
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::complex<double> c = start_value(first_bond(v));
    if (std::abs(c) > vertex_size) {
      vertex_size = std::abs(c);
      vertex_pivot = c;
    }
  }
  const bool vertices_vanish = vertex_size <= 1e-8 * edge_size;
  std::complex<double> scale = 1.0 / (vertices_vanish ? edge_pivot : vertex_pivot);
  a *= scale;
  w *= scale;
  pair.amplitudes = a;
  const double reference = std::abs(scale) * std::max(edge_size, vertex_size);

  pair.vertex_values.assign(g.vertex_count(), 0.0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::complex<double> value = start_value(first_bond(v));
    for (const Incidence& inc : g.incident(v)) {
      int b = g.edge(inc.edge).u == v ? inc.edge : inc.edge + E;
      if (std::abs(start_value(b) - value) > opt.continuity_tol * reference) {
        throw ConvergenceError("eigenfunction is discontinuous at vertex " + std::to_string(v + 1));
      }
    }
    if (std::abs(value.imag()) > 1e-7 * reference) {
      throw ConvergenceError("eigenfunction is not real after phase fixing");
    }
    pair.vertex_values[v] = value.real();
  }
  for (int e = 0; e < E; ++e) {
    std::complex<double> p = w(e) + a(e + E);
    std::complex<double> q = I1 * (w(e) - a(e + E));
    if (std::abs(p.imag()) + std::abs(q.imag()) > 1e-7 * reference) {
      throw ConvergenceError("eigenfunction is not real after phase fixing");
    }
    pair.edge_modes.push_back({p.real(), q.real()});
  }

  double max_value = 0.0, min_value = std::numeric_limits<double>::infinity();
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (mg.conditions()[v] == VertexCondition::dirichlet) continue;
    max_value = std::max(max_value, std::abs(pair.vertex_values[v]));
    min_value = std::min(min_value, std::abs(pair.vertex_values[v]));
  }
  if (vertices_vanish || min_value <= opt.vertex_zero * max_value) pair.status = Genericity::vertex_zero;
  return pair;
}

int count_edge_zeros(const EdgeMode& mode, double k, double length) {
  double amplitude = std::hypot(mode.cos_coeff, mode.sin_coeff);
  if (amplitude < 1e-12) throw NonGenericError("eigenfunction vanishes on an edge");
  double theta = std::atan2(mode.sin_coeff, mode.cos_coeff);
  if (theta < 0.0) theta += kTwoPi;
  // zeros at x = (theta + pi/2 + m pi) / k; count m with 0 < x < length
  double low = (-theta - 0.5 * kPi) / kPi;
  double high = (k * length - theta - 0.5 * kPi) / kPi;
  return static_cast<int>(std::ceil(high) - std::floor(low)) - 1;
}

NodalCounts metric_nodal_counts(const MetricGraph& mg, const MetricEigenpair& pair, int n) {
  const Graph& g = mg.graph();
  NodalCounts counts;
  int interior_segments = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    int zeros = count_edge_zeros(pair.edge_modes[e], pair.k, mg.lengths()[e]);
    if (zeros > 0) counts.sign_changes.push_back(e);
    counts.phi += zeros;
    interior_segments += std::max(0, zeros - 1);
  }
  counts.nu = component_count(g, counts.sign_changes) + interior_segments;
  counts.surplus = counts.phi - (n - 1);
  return counts;
}

std::vector<const MetricNodalEntry*> MetricNodalReport::generic_entries() const {
  std::vector<const MetricNodalEntry*> out;
  for (const MetricNodalEntry& e : entries) {
    if (e.counts) out.push_back(&e);
  }
  return out;
}

int MetricNodalReport::observed_n0() const {
  int n0 = 0;
  for (const MetricNodalEntry& e : entries) {
    if (e.counts && e.counts->phi != e.counts->nu - 1 + betti) n0 = e.n;
  }
  return n0;
}

MetricNodalReport metric_nodal_report(const MetricGraph& mg, std::span<const MetricRoot> roots,
                                      const EigenfunctionOptions& opt) {
  MetricNodalReport report;
  report.betti = mg.betti();
  int n = 1;
  if (mg.all_neumann()) {
    NodalCounts constant;
    constant.nu = 1;
    report.entries.push_back({1, 0.0, 1, Genericity::generic, constant});
    n = 2;
  }
  for (const MetricRoot& root : roots) {
    if (!root.simple()) {
      for (int j = 0; j < root.multiplicity; ++j) {
        report.entries.push_back({n + j, root.k, root.multiplicity, Genericity::degenerate, std::nullopt});
      }
      n += root.multiplicity;
      continue;
    }
    MetricNodalEntry entry{n, root.k, 1, Genericity::generic, std::nullopt};
    MetricEigenpair pair = eigenfunction(mg, root.k, opt);
    entry.status = pair.status;
    if (pair.generic()) entry.counts = metric_nodal_counts(mg, pair, n);
    report.entries.push_back(std::move(entry));
    ++n;
  }
  return report;
}

MetricNodalReport metric_nodal_report_first(const MetricGraph& mg, int generic_count,
                                            const EigenfunctionOptions& opt) {
  if (generic_count < 1) throw InvalidInput("generic_count must be positive");
  const int V = mg.graph().vertex_count();
  double k_max = std::numbers::pi * (generic_count + V + mg.betti() + 2) / mg.total_length();
  for (int attempt = 0; attempt < 6; ++attempt) {
    MetricNodalReport report = metric_nodal_report(mg, k_spectrum(mg, k_max), opt);
    int seen = 0;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      if (report.entries[i].counts && ++seen == generic_count) {
        report.entries.resize(i + 1);
        return report;
      }
    }
    k_max *= seen > 0 ? std::max(1.2, 1.1 * generic_count / seen) : 2.0;
  }
  throw ConvergenceError("could not find " + std::to_string(generic_count) + " generic eigenvalues");
}

double track_root(const SecularSystem& sys, std::span<const double> lengths, double lo, double hi,
                  std::span<const double> flux) {
  double f_lo = secular_value(sys, lengths, lo, flux);
  double f_hi = secular_value(sys, lengths, hi, flux);
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw ConvergenceError("root tracking lost its bracket in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double f_mid = secular_value(sys, lengths, mid, flux);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MagneticHessian k_hessian_fd(const MetricGraph& mg, double k0, const KHessianOptions& opt) {
  const int beta = mg.betti();
  if (beta == 0) return classify_hessian(0, Eigen::MatrixXd(0, 0));
  const SecularSystem sys = secular_system(mg);
  std::span<const double> lengths = mg.lengths();

  // half-width holding k0 alone
  auto isolated = [&](double w, std::span<const double> flux) {
    auto lo = counting_function(sys, lengths, k0 - w, flux);
    auto hi = counting_function(sys, lengths, k0 + w, flux);
    return lo && hi && *hi - *lo == 1;
  };
  std::vector<double> zero(beta, 0.0);
  double w = std::min(0.5 * k0, kPi / mg.total_length());
  int guard = 0;
  while (!isolated(w, zero)) {
    w *= 0.5;
    if (++guard > 60) throw NonGenericError("no isolated root near k = " + std::to_string(k0));
  }
  w *= 0.5;

  auto root_at = [&](const std::vector<double>& flux) {
    if (!isolated(w, flux)) {
      throw ConvergenceError("root tracking collided with a neighbouring root near k = " + std::to_string(k0));
    }
    return track_root(sys, lengths, k0 - w, k0 + w, flux);
  };
  const double centre = root_at(zero);

  std::vector<double> a(beta, 0.0);
  for (int i = 0; i < beta; ++i) {
    a[i] = opt.step;
    double plus = root_at(a);
    a[i] = -opt.step;
    double minus = root_at(a);
    a[i] = 0.0;
    double gradient = (plus - minus) / (2.0 * opt.step);
    if (std::abs(gradient) > opt.gradient_tol) {
      throw ConvergenceError("flux gradient " + std::to_string(gradient) + " does not vanish at k = " +
                             std::to_string(k0));
    }
  }

  auto stencil = [&](double h) {
    Eigen::MatrixXd out(beta, beta);
    for (int i = 0; i < beta; ++i) {
      a[i] = h;
      double plus = root_at(a);
      a[i] = -h;
      double minus = root_at(a);
      a[i] = 0.0;
      out(i, i) = (plus - 2.0 * centre + minus) / (h * h);
      for (int j = 0; j < i; ++j) {
        double sum = 0.0;
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            a[i] = si * h;
            a[j] = sj * h;
            sum += si * sj * root_at(a);
          }
        }
        a[i] = a[j] = 0.0;
        out(i, j) = out(j, i) = sum / (4.0 * h * h);
      }
    }
    return out;
  };
  Eigen::MatrixXd coarse = stencil(opt.step);
  if (!opt.richardson) return classify_hessian(0, coarse);
  Eigen::MatrixXd fine = stencil(0.5 * opt.step);
  return classify_hessian(0, (4.0 * fine - coarse) / 3.0);
}

}  // namespace nodal
