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

// Command-line front end: one subcommand per experiment. Exit status is 0
// when every check passes, 1 when a check fails and 2 on bad input.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nodal/discrete.hpp"
#include "nodal/discretizer.hpp"
#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"
#include "nodal/graph.hpp"
#include "nodal/io.hpp"
#include "nodal/magnetic.hpp"
#include "nodal/metric.hpp"
#include "nodal/torus.hpp"

namespace {

using namespace nodal;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// delta-returns of the flow get rare quickly with the torus dimension
constexpr int kMaxRevisitDimension = 2;

struct Config {
  std::string command;
  std::string input;
  std::string out;
  double kmax = 0.0;
  int n = 0;
  int pmax = 3;
  std::uint64_t seed = 1;
  int ensemble_size = 1000;
  int girth_size = 200;
  int bound = 10;
  int points = 1000;
  int sweep_points = 101;

  double tol_simplicity = 1e-8;
  double tol_vertex_zero = 1e-8;
  double tol_root = 1e-12;
  double tol_metric_vertex_zero = 1e-6;
  double tol_trace = 1e-6;
  double tol_girth = kGirthThreshold;
  double tol_symmetry = 1e-10;
  double tol_hessian = 1e-4;
  double tol_fd = 1e-5;
  double tol_lift = 1e-6;
  double tol_branch = 1e-8;
};

enum class Verbosity { quiet, info, debug };

Verbosity verbosity() {
  const char* v = std::getenv("NODAL_LAB_LOG");
  if (v == nullptr) return Verbosity::info;
  std::string s(v);
  if (s == "quiet") return Verbosity::quiet;
  if (s == "debug") return Verbosity::debug;
  return Verbosity::info;
}

std::ostream& info() {
  static std::ostream null(nullptr);
  return verbosity() == Verbosity::quiet ? null : std::cout;
}

void debug(const std::string& msg) {
  if (verbosity() == Verbosity::debug) std::cerr << "[debug] " << msg << '\n';
}

// Report files go to --out; nothing is written without it.
class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    if (dir_.empty()) return;
    std::filesystem::path path = std::filesystem::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot write " + path.string());
    body(os);
    debug("wrote " + path.string());
  }

  void write_json(const std::string& name, const Json& j) const {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

 private:
  std::string dir_;
};

std::string num(double x) { return format_number(x); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i] < 0 ? "-" : std::to_string(v[i]);
  }
  return s;
}

Json load(const Config& cfg) {
  if (cfg.input.empty()) throw InvalidInput("--input is required");
  return read_json_file(cfg.input);
}

SpectralTolerances spectral_tolerances(const Config& cfg) {
  SpectralTolerances t;
  t.simplicity = cfg.tol_simplicity;
  t.vertex_zero = cfg.tol_vertex_zero;
  return t;
}

EigenfunctionOptions eigen_options(const Config& cfg) {
  EigenfunctionOptions o;
  o.vertex_zero = cfg.tol_metric_vertex_zero;
  return o;
}

void print_skipped(const std::vector<SkippedIndex>& skipped) {
  for (const SkippedIndex& s : skipped) info() << "skipped n=" << s.n << ": " << skip_reason(s) << '\n';
}

bool within_nodal_bounds(int n, const NodalCounts& c, int beta) {
  return c.phi >= n - 1 && c.phi <= n - 1 + beta && c.nu >= n - beta && c.nu <= n;
}

int cmd_spectrum(const Config& cfg, const Output& out) {
  DiscreteOperator op = operator_from_json(load(cfg));
  DiscreteSpectrum sp = eigensystem(op.base, spectral_tolerances(cfg));
  info() << "vertices " << op.graph.vertex_count() << ", betti " << op.betti() << '\n';
  for (int n = 1; n <= op.graph.vertex_count(); ++n) {
    info() << "n=" << n << " lambda=" << num(sp.lambda(n)) << " " << to_string(sp.status[n - 1]) << '\n';
  }
  out.write("spectrum.csv", [&](std::ostream& os) {
    os << "n,lambda,generic\n";
    for (int n = 1; n <= op.graph.vertex_count(); ++n) {
      os << n << ',' << num(sp.lambda(n)) << ',' << to_string(sp.status[n - 1]) << '\n';
    }
  });
  out.write("flux_sweep.csv", [&](std::ostream& os) { write_flux_sweep_csv(os, op, cfg.sweep_points); });
  return kPass;
}

int cmd_nodal(const Config& cfg, const Output& out) {
  DiscreteOperator op = operator_from_json(load(cfg));
  DiscreteSpectrum sp = eigensystem(op.base, spectral_tolerances(cfg));
  NodalReport report = nodal_report(op, sp);
  bool ok = true;
  std::vector<int> ns, sigmas;
  for (const NodalEntry& e : report.entries) {
    if (!e.counts) {
      info() << "skipped n=" << e.n << ": " << to_string(e.status) << '\n';
      continue;
    }
    if (!within_nodal_bounds(e.n, *e.counts, report.betti)) {
      ok = false;
      info() << "bound violated at n=" << e.n << '\n';
    }
    ns.push_back(e.n);
    sigmas.push_back(e.counts->surplus);
  }
  info() << "betti " << report.betti << "\nphi " << join(report.phi_sequence()) << "\nsigma "
         << join(report.surplus_sequence()) << '\n';
  out.write("nodal.csv", [&](std::ostream& os) { write_nodal_csv(os, report); });
  out.write("surplus_series.csv", [&](std::ostream& os) { write_surplus_series_csv(os, ns, sigmas); });
  return ok ? kPass : kFail;
}

int cmd_surplus_morse(const Config& cfg, const Output& out) {
  DiscreteOperator op = operator_from_json(load(cfg));
  SurplusMorseTable table = verify_surplus_equals_morse(op);
  for (const SurplusMorseRow& r : table.rows) {
    info() << "n=" << r.n << " sigma=" << r.surplus << " morse=" << r.morse << (r.pass ? " ok" : " MISMATCH")
           << '\n';
  }
  print_skipped(table.skipped);
  DiscreteSpectrum sp = eigensystem(op.base);
  double gap = 0.0;
  for (const SurplusMorseRow& r : table.rows) {
    if (op.betti() == 0) break;
    MagneticHessian p = hessian_perturbative(op, sp, r.n);
    MagneticHessian f = hessian_fd(op, r.n);
    gap = std::max(gap, (p.matrix - f.matrix).cwiseAbs().maxCoeff());
  }
  info() << "perturbative vs finite-difference max gap " << num(gap) << '\n';
  info() << (table.pass ? "surplus equals Morse index" : "surplus differs from Morse index") << '\n';
  out.write("surplus_morse.csv", [&](std::ostream& os) { write_surplus_morse_csv(os, table); });
  out.write_json("surplus_morse.json", to_json(table));
  out.write("hessian_scatter.csv", [&](std::ostream& os) { write_hessian_scatter_csv(os, op); });
  return table.pass && gap < cfg.tol_fd ? kPass : kFail;
}

bool is_metric_input(const Json& j) { return j.is_object() && j.contains("lengths"); }

int cmd_tree_test(const Config& cfg, const Output& out) {
  Json j = load(cfg);
  bool tree_count = false;
  int beta = 0;
  Json summary;
  if (is_metric_input(j)) {
    MetricGraph mg = metric_graph_from_json(j);
    beta = mg.betti();
    const int wanted = cfg.n > 0 ? cfg.n : 50;
    MetricNodalReport report = metric_nodal_report_first(mg, wanted, eigen_options(cfg));
    tree_count = true;
    int checked = 0;
    for (const MetricNodalEntry* e : report.generic_entries()) {
      ++checked;
      if (e->counts->phi != e->n - 1 || e->counts->nu != e->n) {
        tree_count = false;
        info() << "first non-tree count at n=" << e->n << " (phi=" << e->counts->phi << ", nu=" << e->counts->nu
               << ")\n";
        break;
      }
    }
    summary = {{"metric", true}, {"generic_checked", checked}};
  } else {
    DiscreteOperator op = operator_from_json(j);
    beta = op.betti();
    NodalReport report = nodal_report(op, eigensystem(op.base, spectral_tolerances(cfg)));
    for (const NodalEntry& e : report.entries) {
      if (!e.counts) {
        throw NonGenericError("eigenvalue " + std::to_string(e.n) + " is " + to_string(e.status) +
                              "; the tree test needs every eigenvalue generic");
      }
    }
    TreeVerdict verdict = is_tree_nodal_count(report);
    tree_count = verdict.tree_count;
    if (verdict.first_violation) info() << "first non-tree count at n=" << *verdict.first_violation << '\n';
    summary = {{"metric", false}, {"phi", report.phi_sequence()}};
  }
  info() << "betti " << beta << '\n'
         << "verdict: " << (tree_count ? "a tree's nodal count" : "not a tree's nodal count") << '\n';
  summary["betti"] = beta;
  summary["tree_count"] = tree_count;
  out.write_json("tree_test.json", summary);
  return tree_count == (beta == 0) ? kPass : kFail;
}

int cmd_trace_identities(const Config& cfg, const Output& out) {
  DiscreteOperator op = operator_from_json(load(cfg));
  TraceIdentityReport t = trace_identities(op, cfg.tol_trace);
  info() << "sum of Hessians: relative residual " << num(t.sum_residual) << '\n'
         << "lambda-weighted sum: relative residual " << num(t.weighted_residual) << '\n'
         << (t.pass ? "trace identities hold" : "trace identities fail") << '\n';
  out.write_json("trace_identities.json", Json{{"sum_residual", t.sum_residual},
                                               {"weighted_residual", t.weighted_residual},
                                               {"tolerance", cfg.tol_trace},
                                               {"trace_identity_pass", t.pass}});
  return t.pass ? kPass : kFail;
}

int cmd_girth(const Config& cfg, const Output& out) {
  DiscreteOperator op = operator_from_json(load(cfg));
  std::optional<int> oracle = girth_oracle(op.graph);
  Json summary;
  if (op.betti() > 0 && eigensystem(op.base).all_simple()) {
    summary["trace_identity_pass"] = trace_identities(op, cfg.tol_trace).pass;
  } else {
    summary["trace_identity_pass"] = nullptr;
  }
  if (!oracle) {
    info() << "graph is acyclic\n";
    summary["girth_traces"] = nullptr;
    summary["girth_oracle"] = nullptr;
    out.write_json("girth.json", summary);
    return kPass;
  }
  GirthFromTraces g = girth_from_traces(op, cfg.tol_girth);
  info() << "traces-girth " << g.girth << (g.girth == *oracle ? " = " : " != ") << "oracle " << *oracle << '\n';
  if (g.ambiguous) info() << "warning: a trace ratio lies within a decade of the threshold\n";
  summary["girth_traces"] = g.girth;
  summary["girth_oracle"] = *oracle;
  summary["details"] = to_json(g);
  out.write_json("girth.json", summary);
  return g.girth == *oracle ? kPass : kFail;
}

// Morse index from the root-tracked k Hessian; -1 where it cannot be formed.
std::vector<int> metric_morse(const MetricGraph& mg, const MetricNodalReport& report) {
  std::vector<int> morse(report.entries.size(), -1);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const MetricNodalEntry& e = report.entries[i];
    if (!e.counts || e.k <= 0.0) continue;
    if (mg.betti() == 0) {
      morse[i] = 0;
      continue;
    }
    try {
      morse[i] = k_hessian_fd(mg, e.k).morse_index;
    } catch (const Error& err) {
      debug("no Hessian at k=" + num(e.k) + ": " + err.what());
    }
  }
  return morse;
}

int cmd_metric_spectrum(const Config& cfg, const Output& out) {
  MetricGraph mg = metric_graph_from_json(load(cfg));
  MetricNodalReport report;
  if (cfg.kmax > 0.0) {
    KSpectrumOptions opt;
    opt.root_tol = cfg.tol_root;
    report = metric_nodal_report(mg, k_spectrum(mg, cfg.kmax, {}, opt), eigen_options(cfg));
  } else {
    report = metric_nodal_report_first(mg, cfg.n > 0 ? cfg.n : 50, eigen_options(cfg));
  }
  std::vector<int> morse = metric_morse(mg, report);
  bool ok = true;
  int generic = 0;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const MetricNodalEntry& e = report.entries[i];
    info() << "n=" << e.n << " k=" << num(e.k) << ' ' << to_string(e.status);
    if (e.counts) {
      ++generic;
      info() << " phi=" << e.counts->phi << " nu=" << e.counts->nu << " sigma=" << e.counts->surplus;
      if (!within_nodal_bounds(e.n, *e.counts, report.betti)) ok = false;
      if (morse[i] >= 0) {
        info() << " morse=" << morse[i];
        if (morse[i] != e.counts->surplus) ok = false;
      }
    }
    info() << '\n';
  }
  info() << generic << " generic of " << report.entries.size() << " eigenvalues\n";
  out.write("metric_spectrum.csv", [&](std::ostream& os) { write_metric_spectrum_csv(os, report, morse); });
  return ok ? kPass : kFail;
}

int cmd_torus_check(const Config& cfg, const Output& out) {
  Json j = load(cfg);
  MetricGraph mg = metric_graph_from_json(j);
  LengthDecomposition decomp = decomposition_for(j, mg);
  Json summary{{"generators", decomp.generator_count()}};

  SymmetryReport sym = secular_symmetry(mg, decomp, cfg.points, cfg.seed, cfg.tol_symmetry);
  info() << "symmetry F(x;a) = F(-x;-a): residual " << num(sym.symmetric_residual) << (sym.pass ? " ok" : " FAIL")
         << '\n';
  if (!sym.pass && sym.antisymmetric_residual < cfg.tol_symmetry) {
    info() << "note: F(-x;-a) = -F(x;a) holds instead (residual " << num(sym.antisymmetric_residual) << ")\n";
  }
  summary["symmetry"] = to_json(sym);

  const int wanted = cfg.n > 0 ? cfg.n : 20;
  MetricNodalReport report = metric_nodal_report_first(mg, wanted + 1, eigen_options(cfg));
  double worst = 0.0;
  Json rows = Json::array();
  double reference = 0.0;
  for (const MetricNodalEntry* e : report.generic_entries()) {
    if (e->k <= 0.0) continue;
    if (static_cast<int>(rows.size()) == wanted) break;
    MagneticHessian torus = torus_hessian(mg, decomp, e->k);
    MagneticHessian direct = k_hessian_fd(mg, e->k);
    double diff = mg.betti() ? (torus.matrix - direct.matrix).cwiseAbs().maxCoeff() : 0.0;
    worst = std::max(worst, diff);
    rows.push_back({{"n", e->n}, {"k", e->k}, {"morse", torus.morse_index}, {"difference", diff}});
    if (reference == 0.0) reference = e->k;
  }
  const bool hessian_ok = worst < cfg.tol_hessian;
  info() << "torus vs tracked Hessian over " << rows.size() << " roots: max gap " << num(worst)
         << (hessian_ok ? " ok" : " FAIL") << '\n';
  summary["hessian"] = {{"roots", rows}, {"max_difference", worst}, {"pass", hessian_ok}};

  bool revisit_ok = true;
  if (decomp.generator_count() > kMaxRevisitDimension) {
    info() << "revisit search skipped: torus dimension " << decomp.generator_count() << '\n';
    summary["revisits"] = nullptr;
  } else if (reference > 0.0) {
    RevisitReport same = revisit_analysis(mg, decomp, reference, 10);
    RevisitReport mirrored = revisit_analysis(mg, decomp, reference, 10, 1e-2, true);
    revisit_ok = same.pass && mirrored.pass;
    info() << "revisits of k=" << num(reference) << ": " << same.revisits.size() << " same-side "
           << (same.pass ? "ok" : "FAIL") << ", " << mirrored.revisits.size() << " mirrored "
           << (mirrored.pass ? "ok" : "FAIL") << '\n';
    summary["revisits"] = to_json(same);
    summary["mirrored_revisits"] = to_json(mirrored);
  }
  summary["pass"] = sym.pass && hessian_ok && revisit_ok;
  out.write_json("torus_check.json", summary);
  return sym.pass && hessian_ok && revisit_ok ? kPass : kFail;
}

int cmd_surplus_stats(const Config& cfg, const Output& out) {
  MetricGraph mg = metric_graph_from_json(load(cfg));
  SurplusStatistics stats = surplus_statistics(mg, cfg.n > 0 ? cfg.n : 200);
  info() << "betti " << stats.betti << ", " << stats.total() << " generic eigenvalues below k="
         << num(stats.k_ceiling) << '\n';
  for (std::size_t s = 0; s < stats.counts.size(); ++s) info() << "sigma=" << s << ": " << stats.counts[s] << '\n';
  info() << (stats.pass ? "histogram is symmetric" : "histogram fails the symmetry test") << '\n';
  out.write("statistics.csv", [&](std::ostream& os) { write_statistics_csv(os, stats); });
  out.write("surplus_series.csv",
            [&](std::ostream& os) { write_surplus_series_csv(os, stats.sample_index, stats.sample_surplus); });
  return stats.pass ? kPass : kFail;
}

int cmd_discretize(const Config& cfg, const Output& out) {
  Json j = load(cfg);
  MetricGraph mg = metric_graph_from_json(j);
  LengthDecomposition decomp = decomposition_for(j, mg);
  DiscretizationList list = enumerate_discretizations(decomp, cfg.bound);
  Json summary{{"bound", cfg.bound}};
  Json counts = Json::array();
  for (const std::vector<int>& c : list.counts) {
    counts.push_back(c);
    info() << "counts " << join(c) << '\n';
  }
  summary["counts"] = counts;
  if (list.counts.empty()) {
    info() << "no discretization with counts <= " << cfg.bound;
    if (list.minimal_bound) info() << "; smallest workable bound is " << *list.minimal_bound;
    info() << '\n';
    summary["minimal_bound"] = list.minimal_bound ? Json(*list.minimal_bound) : Json(nullptr);
    out.write_json("discretize.json", summary);
    return kPass;
  }

  DiscretizedVersion version = discretize(mg.graph(), decomp, list.counts.front());
  info() << "first discretized graph: " << version.subdivision.graph.vertex_count() << " vertices, "
         << version.subdivision.graph.edge_count() << " edges\n";
  summary["graph"] = to_json(version.subdivision.graph);

  const double kmax = cfg.kmax > 0.0 ? cfg.kmax : 10.0;
  std::vector<MetricRoot> roots = k_spectrum(mg, kmax);
  DirectionalReport dir = directional_derivative_sign_check(mg, decomp, list.counts.front(), roots);
  info() << "directional derivative sign along the segment: " << dir.checks.size() << " roots "
         << (dir.pass ? "ok" : "FAIL") << '\n';
  Json checks = Json::array();
  for (const DirectionalCheck& c : dir.checks) {
    checks.push_back({{"k", c.k}, {"derivatives", c.derivatives}, {"pass", c.pass}});
  }
  summary["directional"] = {{"checks", checks}, {"pass", dir.pass}};
  out.write_json("discretize.json", summary);
  return dir.pass ? kPass : kFail;
}

Graph graph_of(const Json& j) {
  if (j.contains("graph")) return graph_from_json(j.at("graph"));
  return graph_from_json(j);
}

int cmd_equilateral_check(const Config& cfg, const Output& out) {
  Graph g = graph_of(load(cfg));
  EquilateralOptions opt;
  opt.p_max = cfg.pmax;
  opt.root_tol = cfg.tol_branch;
  opt.lift_tol = cfg.tol_lift;
  EquilateralReport eq = verify_equilateral_connection(g, opt);
  info() << eq.checks.size() << " generic mu checked up to k=" << num(eq.k_ceiling) << '\n';
  print_skipped(eq.skipped);
  info() << "branch values are roots: " << (eq.branch_roots ? "yes" : "no") << '\n'
         << "other roots in pi Z: " << (eq.dirichlet_check ? "yes" : "no") << '\n'
         << "vertex traces match D^{-1/2} f: " << (eq.trace_lift_check ? "yes" : "no") << '\n'
         << "vertex traces match D^{1/2} f: " << (eq.scaled_lift_check ? "yes" : "no") << '\n';

  SurplusTransferReport transfer = verify_surplus_transfer(g, cfg.pmax);
  if (transfer.vacuous) {
    info() << "surplus transfer: vacuous (" << transfer.vacuous_reason << ")\n";
  } else {
    info() << "surplus transfer over " << transfer.entries.size() << " mu: " << (transfer.pass ? "ok" : "FAIL")
           << '\n';
  }
  out.write_json("equilateral.json", Json{{"equilateral", to_json(eq)}, {"transfer", to_json(transfer)}});
  return eq.pass() && transfer.pass ? kPass : kFail;
}

int cmd_ensemble(const Config& cfg, const Output& out) {
  EnsembleOptions opt;
  opt.seed = cfg.seed;
  opt.size = cfg.ensemble_size;
  EnsembleSummary s = run_ensemble(opt);
  GirthSweep girth = girth_sweep(cfg.seed + 1, cfg.girth_size, 8, 3, cfg.tol_girth);
  const bool fd_ok = s.max_hessian_gap < cfg.tol_fd;
  const bool trace_ok = s.max_trace_residual < cfg.tol_trace;
  info() << s.records.size() << " operators, " << s.generic_indices << " generic indices\n"
         << "surplus = Morse failures: " << s.surplus_morse_failures << '\n'
         << "perturbative vs FD max gap: " << num(s.max_hessian_gap) << '\n'
         << "trace identity max residual: " << num(s.max_trace_residual) << '\n'
         << "trees " << s.trees << " (non-tree counts " << s.tree_failures << "), cyclic all-generic "
         << s.cyclic_all_generic << " (tree counts " << s.cyclic_tree_counts << ")\n"
         << "forbidden surplus shapes: " << s.forbidden_shapes << '\n'
         << "girth agreement: " << girth.agreements << "/" << girth.graphs << '\n';
  Json summary = to_json(s);
  summary["girth"] = to_json(girth);
  out.write("ensemble.csv", [&](std::ostream& os) { write_ensemble_csv(os, s); });
  out.write_json("ensemble.json", summary);
  const bool ok = s.surplus_morse_failures == 0 && s.nodal_bound_failures == 0 && fd_ok && trace_ok &&
                  s.trace_failures == 0 && s.tree_failures == 0 && s.cyclic_tree_counts == 0 &&
                  s.forbidden_shapes == 0 && girth.pass();
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal counts, magnetic Hessians and secular functions on graphs", "nodal_lab"};
  app.require_subcommand(1);
  Config cfg;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Config&, const Output&);
  };
  const std::vector<Command> commands = {
      {"spectrum", "eigenvalues with genericity flags", cmd_spectrum},
      {"nodal", "nodal point and domain counts", cmd_nodal},
      {"surplus-morse", "compare nodal surplus with the magnetic Morse index", cmd_surplus_morse},
      {"tree-test", "decide whether the nodal counts look like a tree's", cmd_tree_test},
      {"trace-identities", "check that the Hessian sums vanish", cmd_trace_identities},
      {"girth", "girth from Hessian traces against BFS", cmd_girth},
      {"metric-spectrum", "k-spectrum and nodal counts of a metric graph", cmd_metric_spectrum},
      {"torus-check", "secular symmetry, torus Hessian and revisit checks", cmd_torus_check},
      {"surplus-stats", "surplus histogram of the first N generic eigenvalues", cmd_surplus_stats},
      {"discretize", "integer discretizations of a metric graph", cmd_discretize},
      {"equilateral-check", "equilateral spectral map and surplus transfer", cmd_equilateral_check},
      {"ensemble", "randomized property sweep", cmd_ensemble},
  };

  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--input", cfg.input, "input JSON file");
    sub->add_option("--out", cfg.out, "directory for report files");
    sub->add_option("--kmax", cfg.kmax, "upper end of the k scan");
    sub->add_option("--n", cfg.n, "number of eigenvalues or roots");
    sub->add_option("--pmax", cfg.pmax, "largest arccos branch index")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--ensemble-size", cfg.ensemble_size, "number of random operators")
        ->check(CLI::PositiveNumber);
    sub->add_option("--girth-size", cfg.girth_size, "number of random graphs in the girth sweep")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bound", cfg.bound, "largest subdivision count")->check(CLI::PositiveNumber);
    sub->add_option("--points", cfg.points, "random points for the symmetry check")->check(CLI::PositiveNumber);
    sub->add_option("--sweep-points", cfg.sweep_points, "flux grid size")->check(CLI::Range(2, 100000));
    sub->add_option("--tol-simplicity", cfg.tol_simplicity, "relative eigenvalue gap for simplicity");
    sub->add_option("--tol-vertex-zero", cfg.tol_vertex_zero, "relative vertex value counted as zero");
    sub->add_option("--tol-metric-vertex-zero", cfg.tol_metric_vertex_zero,
                    "relative vertex value counted as zero on metric graphs");
    sub->add_option("--tol-root", cfg.tol_root, "bisection width in k");
    sub->add_option("--tol-trace", cfg.tol_trace, "trace identity tolerance");
    sub->add_option("--tol-girth", cfg.tol_girth, "trace ratio counted as nonzero");
    sub->add_option("--tol-symmetry", cfg.tol_symmetry, "secular symmetry tolerance");
    sub->add_option("--tol-hessian", cfg.tol_hessian, "torus vs tracked Hessian tolerance");
    sub->add_option("--tol-fd", cfg.tol_fd, "perturbative vs FD Hessian tolerance");
    sub->add_option("--tol-lift", cfg.tol_lift, "vertex trace tolerance");
    sub->add_option("--tol-branch", cfg.tol_branch, "branch value to root distance");
    sub->callback([&cfg, name = c.name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "nodal_lab: error: " << msg << '\n';
    return kUsage;
  }

  try {
    Output out(cfg.out);
    for (const Command& c : commands) {
      if (cfg.command == c.name) return c.run(cfg, out);
    }
    std::cerr << "nodal_lab: error: unknown subcommand\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "nodal_lab: error: " << msg << '\n';
    return kUsage;
  }
}
