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

#include "nodal/magnetic.hpp"

#include <cmath>
#include <limits>

#include "nodal/error.hpp"

namespace nodal {

MagneticHessian classify_hessian(int n, Eigen::MatrixXd matrix, double det_tol) {
  MagneticHessian h;
  h.n = n;
  h.matrix = std::move(matrix);
  if (h.matrix.size() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    if (solver.eigenvalues()(i) < 0.0) ++h.morse_index;
  }
  h.degenerate = std::abs(h.matrix.determinant()) <= det_tol;
  return h;
}

namespace {

void require_index(const DiscreteOperator& op, int n) {
  if (n < 1 || n > op.graph.vertex_count()) {
    throw InvalidInput("eigen index " + std::to_string(n) + " outside 1.." +
                       std::to_string(op.graph.vertex_count()));
  }
}

double nth_eigenvalue(const DiscreteOperator& op, int n, const std::vector<double>& flux) {
  return eigenvalues(apply_flux(op, flux))(n - 1);
}

}  // namespace

MagneticHessian hessian_perturbative(const DiscreteOperator& op, const DiscreteSpectrum& spectrum, int n) {
  require_index(op, n);
  if (!spectrum.simple(n)) {
    throw NonGenericError("eigenvalue " + std::to_string(n) + " is degenerate; its flux Hessian is undefined");
  }
  const int beta = op.betti();
  const int V = spectrum.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(beta, beta);
  if (beta == 0) return classify_hessian(n, h);

  auto f = spectrum.vector(n);
  std::vector<Edge> chord(beta);
  std::vector<double> weight(beta);
  for (int i = 0; i < beta; ++i) {
    chord[i] = op.graph.edge(op.gauge.chords[i]);
    weight[i] = op.base(chord[i].u, chord[i].v);
    h(i, i) = -2.0 * weight[i] * f(chord[i].u) * f(chord[i].v);
  }
  // <f_n, dL_i f_m> = i w_i c_i(m) and <f_m, dL_j f_n> = -i w_j c_j(m)
  Eigen::VectorXd c(beta);
  for (int m = 1; m <= V; ++m) {
    if (m == n) continue;
    auto g = spectrum.vector(m);
    for (int i = 0; i < beta; ++i) {
      c(i) = weight[i] * (f(chord[i].u) * g(chord[i].v) - f(chord[i].v) * g(chord[i].u));
    }
    h += (2.0 / (spectrum.lambda(n) - spectrum.lambda(m))) * c * c.transpose();
  }
  return classify_hessian(n, h);
}

MagneticHessian hessian_fd(const DiscreteOperator& op, int n, const FdOptions& opt) {
  require_index(op, n);
  const int beta = op.betti();
  if (beta == 0) return classify_hessian(n, Eigen::MatrixXd(0, 0));

  Eigen::VectorXd lambda0 = eigenvalues(apply_flux(op, std::vector<double>(beta, 0.0)));
  double gap = std::numeric_limits<double>::infinity();
  if (n > 1) gap = std::min(gap, lambda0(n - 1) - lambda0(n - 2));
  if (n < lambda0.size()) gap = std::min(gap, lambda0(n) - lambda0(n - 1));
  // near-degenerate pairs curve sharply in the flux, so start smaller
  const double step = std::min(opt.step, 0.1 * gap);
  if (step < 1e-6) {
    throw NonGenericError("eigenvalue " + std::to_string(n) + " gap " + std::to_string(gap) +
                          " is too small for finite-difference tracking");
  }

  auto stencil = [&](double h) {
    Eigen::MatrixXd out(beta, beta);
    const double centre = lambda0(n - 1);
    std::vector<double> a(beta, 0.0);
    for (int i = 0; i < beta; ++i) {
      a[i] = h;
      double plus = nth_eigenvalue(op, n, a);
      a[i] = -h;
      double minus = nth_eigenvalue(op, n, a);
      a[i] = 0.0;
      out(i, i) = (plus - 2.0 * centre + minus) / (h * h);
      for (int j = 0; j < i; ++j) {
        double sum = 0.0;
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            a[i] = si * h;
            a[j] = sj * h;
            sum += si * sj * nth_eigenvalue(op, n, a);
          }
        }
        a[i] = a[j] = 0.0;
        out(i, j) = out(j, i) = sum / (4.0 * h * h);
      }
    }
    return out;
  };

  if (!opt.richardson) return classify_hessian(n, stencil(step));

  // Ridders extrapolation: shrink h geometrically, keep the entry of the
  // Neville tableau with the smallest error estimate.
  constexpr int kLevels = 8;
  constexpr double kShrink = 1.6;
  constexpr double kShrink2 = kShrink * kShrink;
  std::vector<std::vector<Eigen::MatrixXd>> table(kLevels, std::vector<Eigen::MatrixXd>(kLevels));
  Eigen::MatrixXd best;
  double best_err = std::numeric_limits<double>::infinity();
  double h = step;
  table[0][0] = stencil(h);
  best = table[0][0];
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    table[0][i] = stencil(h);
    double factor = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (factor * table[j - 1][i] - table[j - 1][i - 1]) / (factor - 1.0);
      factor *= kShrink2;
      double err = std::max((table[j][i] - table[j - 1][i]).cwiseAbs().maxCoeff(),
                            (table[j][i] - table[j - 1][i - 1]).cwiseAbs().maxCoeff());
      if (err <= best_err) {
        best_err = err;
        best = table[j][i];
      }
    }
    if ((table[i][i] - table[i - 1][i - 1]).cwiseAbs().maxCoeff() >= 2.0 * best_err) break;
  }
  return classify_hessian(n, best);
}

Eigen::VectorXd flux_gradient_fd(const DiscreteOperator& op, int n, double step) {
  require_index(op, n);
  const int beta = op.betti();
  Eigen::VectorXd grad(beta);
  std::vector<double> a(beta, 0.0);
  for (int i = 0; i < beta; ++i) {
    a[i] = step;
    double plus = nth_eigenvalue(op, n, a);
    a[i] = -step;
    double minus = nth_eigenvalue(op, n, a);
    a[i] = 0.0;
    grad(i) = (plus - minus) / (2.0 * step);
  }
  return grad;
}

SurplusMorseTable verify_surplus_equals_morse(const DiscreteOperator& op) {
  DiscreteSpectrum spectrum = eigensystem(op.base);
  NodalReport report = nodal_report(op, spectrum);
  SurplusMorseTable table;
  for (const NodalEntry& entry : report.entries) {
    if (!entry.counts) {
      table.skipped.push_back({entry.n, entry.status});
      continue;
    }
    MagneticHessian h = hessian_perturbative(op, spectrum, entry.n);
    SurplusMorseRow row{entry.n, entry.lambda, entry.counts->surplus, h.morse_index, h.degenerate, false};
    row.pass = row.surplus == row.morse;
    table.pass = table.pass && row.pass;
    table.rows.push_back(row);
  }
  return table;
}

TraceIdentityReport trace_identities(const DiscreteOperator& op, double tol) {
  DiscreteSpectrum spectrum = eigensystem(op.base);
  if (!spectrum.all_simple()) {
    throw NonGenericError("trace identities need a simple spectrum");
  }
  const int beta = op.betti();
  TraceIdentityReport out;
  out.sum_hessians = Eigen::MatrixXd::Zero(beta, beta);
  out.weighted_sum = Eigen::MatrixXd::Zero(beta, beta);
  if (beta == 0) {
    out.pass = true;
    return out;
  }
  for (int n = 1; n <= spectrum.size(); ++n) {
    Eigen::MatrixXd h = hessian_perturbative(op, spectrum, n).matrix;
    double lambda = spectrum.lambda(n);
    double size = h.cwiseAbs().maxCoeff();
    out.sum_hessians += h;
    out.weighted_sum += lambda * h;
    out.sum_scale += size;
    out.weighted_scale += std::abs(lambda) * size;
  }
  auto relative = [](const Eigen::MatrixXd& m, double scale) {
    double size = m.cwiseAbs().maxCoeff();
    return scale > 0.0 ? size / scale : size;
  };
  out.sum_residual = relative(out.sum_hessians, out.sum_scale);
  out.weighted_residual = relative(out.weighted_sum, out.weighted_scale);
  out.pass = out.sum_residual < tol && out.weighted_residual < tol;
  return out;
}

bool has_forbidden_shape(std::span<const int> surplus, int beta) {
  if (beta <= 0) return false;
  const int V = static_cast<int>(surplus.size());
  int m = 0;
  while (m < V && surplus[m] == 0) ++m;
  for (int i = m; i < V; ++i) {
    if (surplus[i] != beta) return false;
  }
  return true;
}

bool forbidden_surplus_check(const NodalReport& report, int beta) {
  if (!report.all_generic()) {
    throw NonGenericError("forbidden-shape check needs every eigenvalue generic");
  }
  std::vector<int> surplus = report.surplus_sequence();
  return !has_forbidden_shape(surplus, beta);
}

GirthFromTraces girth_from_traces(const DiscreteOperator& op, double threshold) {
  const int beta = op.betti();
  if (beta == 0) throw InvalidInput("girth from traces needs a graph with a cycle");
  DiscreteSpectrum spectrum = eigensystem(op.base);
  if (!spectrum.all_simple()) throw NonGenericError("girth from traces needs a simple spectrum");

  const int V = spectrum.size();
  const double centre = 0.5 * (spectrum.eigenvalues(0) + spectrum.eigenvalues(V - 1));
  std::vector<Eigen::MatrixXd> hessians;
  for (int n = 1; n <= V; ++n) hessians.push_back(hessian_perturbative(op, spectrum, n).matrix);

  GirthFromTraces out;
  out.threshold = threshold;
  for (int k = 2; k <= V; ++k) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(beta, beta);
    double trace_sum = 0.0, scale = 0.0, trace_scale = 0.0;
    for (int n = 0; n < V; ++n) {
      double w = std::pow(spectrum.eigenvalues(n) - centre, k - 1);
      sum += w * hessians[n];
      trace_sum += w * hessians[n].trace();
      scale += std::abs(w) * hessians[n].cwiseAbs().maxCoeff();
      trace_scale += std::abs(w * hessians[n].trace());
    }
    double ratio = scale > 0.0 ? sum.cwiseAbs().maxCoeff() / scale : 0.0;
    double scalar_ratio = trace_scale > 0.0 ? std::abs(trace_sum) / trace_scale : 0.0;
    out.ratios.push_back(ratio);
    out.scalar_ratios.push_back(scalar_ratio);
    if (out.girth == 0) {
      if (ratio > threshold / 10.0 && ratio < threshold * 10.0) out.ambiguous = true;
      if (ratio > threshold) out.girth = k;
    }
    if (!out.scalar_girth && scalar_ratio > threshold) out.scalar_girth = k;
  }
  if (out.girth == 0) {
    throw ConvergenceError("no trace sum exceeded the threshold for k <= |V|");
  }
  return out;
}

}  // namespace nodal
