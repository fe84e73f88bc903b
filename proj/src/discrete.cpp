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

#include "nodal/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/error.hpp"

namespace nodal {

std::vector<double> DiscreteOperator::diagonal() const {
  std::vector<double> d(graph.vertex_count());
  for (int v = 0; v < graph.vertex_count(); ++v) d[v] = base(v, v);
  return d;
}

std::vector<double> DiscreteOperator::edge_weights() const {
  std::vector<double> w;
  for (const Edge& e : graph.edges()) w.push_back(base(e.u, e.v));
  return w;
}

DiscreteOperator build_normalized(const Graph& g) {
  const int V = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(V, V);
  for (const Edge& e : g.edges()) {
    double w = -1.0 / std::sqrt(static_cast<double>(g.degree(e.u)) * g.degree(e.v));
    m(e.u, e.v) = w;
    m(e.v, e.u) = w;
  }
  if (V == 1) m(0, 0) = 0.0;  // isolated vertex: the normalized Laplacian is zero
  return {g, std::move(m), OperatorKind::normalized, cycle_basis(g)};
}

DiscreteOperator build_generalized(const Graph& g, std::span<const double> edge_weights,
                                   std::span<const double> diagonal) {
  if (static_cast<int>(edge_weights.size()) != g.edge_count()) {
    throw InvalidInput("expected " + std::to_string(g.edge_count()) + " edge weights, got " +
                       std::to_string(edge_weights.size()));
  }
  if (static_cast<int>(diagonal.size()) != g.vertex_count()) {
    throw InvalidInput("expected " + std::to_string(g.vertex_count()) + " diagonal entries, got " +
                       std::to_string(diagonal.size()));
  }
  const int V = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(V, V);
  for (int v = 0; v < V; ++v) {
    if (!std::isfinite(diagonal[v])) throw InvalidInput("diagonal entry " + std::to_string(v + 1) + " is not finite");
    m(v, v) = diagonal[v];
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    double w = edge_weights[e];
    if (!(w < 0.0) || !std::isfinite(w)) {
      const Edge& ed = g.edge(e);
      throw InvalidInput("edge {" + std::to_string(ed.u + 1) + "," + std::to_string(ed.v + 1) +
                         "} has weight " + std::to_string(w) + "; off-diagonal entries must be negative");
    }
    m(g.edge(e).u, g.edge(e).v) = w;
    m(g.edge(e).v, g.edge(e).u) = w;
  }
  return {g, std::move(m), OperatorKind::generalized, cycle_basis(g)};
}

Eigen::MatrixXcd apply_flux(const DiscreteOperator& op, std::span<const double> flux) {
  if (static_cast<int>(flux.size()) != op.betti()) {
    throw InvalidInput("flux vector has " + std::to_string(flux.size()) + " entries, graph has beta = " +
                       std::to_string(op.betti()));
  }
  Eigen::MatrixXcd m = op.base.cast<std::complex<double>>();
  for (int i = 0; i < op.betti(); ++i) {
    const Edge& e = op.graph.edge(op.gauge.chords[i]);
    std::complex<double> phase = std::polar(1.0, flux[i]);
    m(e.u, e.v) = op.base(e.u, e.v) * phase;
    m(e.v, e.u) = op.base(e.v, e.u) * std::conj(phase);
  }
  return m;
}

std::string to_string(Genericity g) {
  switch (g) {
    case Genericity::generic: return "generic";
    case Genericity::degenerate: return "degenerate";
    case Genericity::vertex_zero: return "vertex_zero";
  }
  return "unknown";
}

template <class Scalar>
bool BasicSpectrum<Scalar>::all_generic() const {
  return std::all_of(status.begin(), status.end(), [](Genericity g) { return g == Genericity::generic; });
}

template <class Scalar>
bool BasicSpectrum<Scalar>::all_simple() const {
  return std::none_of(status.begin(), status.end(), [](Genericity g) { return g == Genericity::degenerate; });
}

template <class Scalar>
std::vector<int> BasicSpectrum<Scalar>::generic_set() const {
  std::vector<int> out;
  for (int n = 1; n <= size(); ++n) {
    if (generic(n)) out.push_back(n);
  }
  return out;
}

template struct BasicSpectrum<double>;
template struct BasicSpectrum<std::complex<double>>;

namespace {

template <class Matrix>
void require_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw InvalidInput("matrix is not Hermitian: max |M - M^H| = " + std::to_string(asym));
  }
}

template <class Scalar>
BasicSpectrum<Scalar> solve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                            const SpectralTolerances& tol) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require_hermitian(m, tol.hermitian);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");

  BasicSpectrum<Scalar> out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const int V = static_cast<int>(m.rows());

  const double norm = std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff());
  for (int j = 0; j < V; ++j) {
    auto col = out.eigenvectors.col(j);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);  // first index of largest magnitude
    Scalar pivot = col(arg);
    col *= std::abs(pivot) / pivot;
    double residual = (m * col - out.eigenvalues(j) * col).norm();
    if (residual > 1e-10 * norm) {
      throw ConvergenceError("eigenpair residual " + std::to_string(residual) + " exceeds bound");
    }
  }

  const double width = V > 1 ? out.eigenvalues(V - 1) - out.eigenvalues(0) : 0.0;
  const double gap_tol = tol.simplicity * width;
  out.status.assign(V, Genericity::generic);
  for (int j = 0; j < V; ++j) {
    bool close_left = j > 0 && out.eigenvalues(j) - out.eigenvalues(j - 1) <= gap_tol;
    bool close_right = j + 1 < V && out.eigenvalues(j + 1) - out.eigenvalues(j) <= gap_tol;
    if (close_left || close_right) {
      out.status[j] = Genericity::degenerate;
      continue;
    }
    Eigen::VectorXd mags = out.eigenvectors.col(j).cwiseAbs();
    if (mags.minCoeff() <= tol.vertex_zero * mags.maxCoeff()) out.status[j] = Genericity::vertex_zero;
  }
  return out;
}

}  // namespace

DiscreteSpectrum eigensystem(const Eigen::MatrixXd& m, const SpectralTolerances& tol) { return solve(m, tol); }

HermitianSpectrum eigensystem(const Eigen::MatrixXcd& m, const SpectralTolerances& tol) { return solve(m, tol); }

Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m, double hermitian_tol) {
  require_hermitian(m, hermitian_tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

bool NodalReport::all_generic() const {
  return std::all_of(entries.begin(), entries.end(), [](const NodalEntry& e) { return e.counts.has_value(); });
}

std::vector<int> NodalReport::phi_sequence() const {
  std::vector<int> out;
  for (const NodalEntry& e : entries) out.push_back(e.counts ? e.counts->phi : -1);
  return out;
}

std::vector<int> NodalReport::surplus_sequence() const {
  std::vector<int> out;
  for (const NodalEntry& e : entries) out.push_back(e.counts ? e.counts->surplus : -1);
  return out;
}

int component_count(const Graph& g, std::span<const int> removed_edges) {
  std::vector<char> removed(g.edge_count(), 0);
  for (int e : removed_edges) removed[e] = 1;
  std::vector<int> parent(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) parent[v] = v;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = g.vertex_count();
  for (int e = 0; e < g.edge_count(); ++e) {
    if (removed[e]) continue;
    int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

NodalReport nodal_report(const DiscreteOperator& op, const DiscreteSpectrum& spectrum) {
  NodalReport report;
  report.betti = op.betti();
  for (int n = 1; n <= spectrum.size(); ++n) {
    NodalEntry entry{n, spectrum.lambda(n), spectrum.status[n - 1], std::nullopt};
    if (spectrum.generic(n)) {
      auto f = spectrum.vector(n);
      NodalCounts counts;
      for (int e = 0; e < op.graph.edge_count(); ++e) {
        const Edge& ed = op.graph.edge(e);
        if (f(ed.u) * f(ed.v) < 0.0) counts.sign_changes.push_back(e);
      }
      counts.phi = static_cast<int>(counts.sign_changes.size());
      counts.nu = component_count(op.graph, counts.sign_changes);
      counts.surplus = counts.phi - (n - 1);
      entry.counts = std::move(counts);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

TreeVerdict is_tree_nodal_count(const NodalReport& report) {
  for (const NodalEntry& e : report.entries) {
    if (!e.counts) {
      throw NonGenericError("eigenvalue " + std::to_string(e.n) + " is not generic (" + to_string(e.status) +
                            "); the tree test needs every eigenvalue generic");
    }
  }
  TreeVerdict verdict{true, std::nullopt};
  for (const NodalEntry& e : report.entries) {
    if (e.counts->phi != e.n - 1) {
      verdict = {false, e.n};
      break;
    }
  }
  return verdict;
}

}  // namespace nodal
