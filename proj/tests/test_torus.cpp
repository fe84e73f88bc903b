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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nodal/error.hpp"
#include "nodal/metric.hpp"
#include "nodal/torus.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

const double s2 = std::sqrt(2.0);
const double s3 = std::sqrt(3.0);

MetricGraph lasso() { return MetricGraph(Graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}), {1.0, 0.5, 2.0 / 3.0, s2}); }

LengthDecomposition lasso_decomposition() {
  return decompose_lengths(lasso().lengths(), {{Rational(1, 2), Rational(-1), Rational(0), Rational(0)},
                                               {Rational(2, 3), Rational(0), Rational(-1), Rational(0)}});
}

std::vector<Rational> ints(std::initializer_list<int> v) {
  std::vector<Rational> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("decompose_lengths") {
  SUBCASE("independent lengths are their own generators") {
    LengthDecomposition d = decompose_lengths(std::vector<double>{s2, s3}, {});
    CHECK(d.generator_count() == 2);
    CHECK(d.generators == std::vector<double>{s2, s3});
  }
  SUBCASE("rational lengths need one generator") {
    LengthDecomposition d = decompose_lengths(std::vector<double>{1, 2, 3}, {ints({2, -1, 0}), ints({3, 0, -1})});
    CHECK(d.generator_count() == 1);
    CHECK(d.periods()[0] == doctest::Approx(2 * pi));
  }
  SUBCASE("one relation") {
    LengthDecomposition d = decompose_lengths(std::vector<double>{s2, 2 * s2, s3}, {ints({2, -1, 0})});
    REQUIRE(d.generator_count() == 2);
    CHECK(d.coefficients[0] == ints({1, 0}));
    CHECK(d.coefficients[1] == ints({2, 0}));
    CHECK(d.coefficients[2] == ints({0, 1}));
    std::vector<double> back = d.lengths();
    CHECK(back[1] == doctest::Approx(2 * s2).epsilon(1e-12));
  }
  SUBCASE("relations must hold numerically") {
    CHECK_THROWS_AS(decompose_lengths(std::vector<double>{1.0, 2.1}, {ints({2, -1})}), InvalidInput);
  }
  SUBCASE("lasso periods") {
    std::vector<double> p = lasso_decomposition().periods();
    CHECK(p[0] == doctest::Approx(12 * pi));
    CHECK(p[1] == doctest::Approx(2 * pi));
  }
}

TEST_CASE("F on the flow equals the secular function") {
  MetricGraph mg = lasso();
  LengthDecomposition d = lasso_decomposition();
  SecularSystem sys = secular_system(mg);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> k_dist(0.1, 50.0);
  for (int t = 0; t < 100; ++t) {
    double k = k_dist(rng);
    std::vector<double> x{k * d.generators[0], k * d.generators[1]};
    CHECK(std::abs(F_on_torus(sys, d, x) - secular_value(mg, k)) < 1e-10);
  }
}

TEST_CASE("F is periodic on the torus") {
  MetricGraph mg = lasso();
  LengthDecomposition d = lasso_decomposition();
  SecularSystem sys = secular_system(mg);
  std::vector<double> periods = d.periods();
  std::vector<double> x{0.37, 1.91}, flux{0.6};
  double f = F_on_torus(sys, d, x, flux);
  for (int i = 0; i < 2; ++i) {
    std::vector<double> y = x;
    y[i] += periods[i];
    CHECK(std::abs(F_on_torus(sys, d, y, flux) - f) < 1e-10);
  }
}

TEST_CASE("secular symmetry under x, alpha -> -x, -alpha") {
  SymmetryReport odd = secular_symmetry(lasso(), lasso_decomposition(), 200, 8);
  CHECK(odd.pass);
  // with two independent cycles the function flips sign instead
  MetricGraph eight(Graph(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}}), {1.0, s2, s3, 0.8, std::sqrt(5.0), 1.2});
  LengthDecomposition d = decompose_lengths(eight.lengths(), {});
  SymmetryReport even = secular_symmetry(eight, d, 200, 8);
  CHECK_FALSE(even.pass);
  CHECK(even.antisymmetric_residual < 1e-10);
}

TEST_CASE("torus Hessian matches the tracked k Hessian") {
  MetricGraph mg = lasso();
  LengthDecomposition d = lasso_decomposition();
  int compared = 0;
  for (const MetricRoot& r : k_spectrum(mg, 15.0)) {
    if (!r.simple() || !eigenfunction(mg, r.k).generic()) continue;
    MagneticHessian torus = torus_hessian(mg, d, r.k);
    MagneticHessian direct = k_hessian_fd(mg, r.k);
    CHECK((torus.matrix - direct.matrix).cwiseAbs().maxCoeff() < 1e-4);
    ++compared;
  }
  CHECK(compared >= 8);
}

TEST_CASE("torus Hessian at x and -x: opposite signs, Morse indices sum to beta") {
  MetricGraph mg = lasso();
  LengthDecomposition d = lasso_decomposition();
  SecularSystem sys = secular_system(mg);
  std::vector<MetricRoot> roots = k_spectrum(mg, 6.0);
  for (const MetricRoot& r : roots) {
    if (!r.simple() || !eigenfunction(mg, r.k).generic()) continue;
    std::vector<double> x{r.k * d.generators[0], r.k * d.generators[1]};
    std::vector<double> neg{-x[0], -x[1]};
    MagneticHessian a = torus_hessian_at(sys, d, x, d.generators);
    MagneticHessian b = torus_hessian_at(sys, d, neg, d.generators);
    CHECK(a.matrix(0, 0) == doctest::Approx(-b.matrix(0, 0)).epsilon(1e-6));
    CHECK(a.morse_index + b.morse_index == 1);
  }
}

TEST_CASE("trees have empty torus Hessians") {
  MetricGraph star(Graph(4, {{0, 1}, {0, 2}, {0, 3}}), {1.0, s2, s3});
  LengthDecomposition d = decompose_lengths(star.lengths(), {});
  std::vector<MetricRoot> roots = k_spectrum(star, 3.0);
  REQUIRE_FALSE(roots.empty());
  CHECK(torus_hessian(star, d, roots.front().k).matrix.size() == 0);
}

TEST_CASE("revisits keep the Morse index") {
  MetricGraph mg = lasso();
  LengthDecomposition d = lasso_decomposition();
  std::vector<MetricRoot> roots = k_spectrum(mg, 3.0);
  RevisitReport same = revisit_analysis(mg, d, roots[1].k, 10);
  CHECK(same.revisits.size() == 10);
  CHECK(same.pass);
  for (const Revisit& v : same.revisits) {
    CHECK(v.distance < 1e-2);
    CHECK(v.morse_index == same.reference_morse);
  }
  RevisitReport mirrored = revisit_analysis(mg, d, roots[1].k, 10, 1e-2, true);
  CHECK(mirrored.pass);
  for (const Revisit& v : mirrored.revisits) CHECK(v.morse_index + mirrored.reference_morse == 1);
}

TEST_CASE("surplus statistics") {
  SurplusStatistics lasso_stats = surplus_statistics(lasso(), 200);
  CHECK(lasso_stats.total() == 200);
  CHECK(lasso_stats.counts[0] > 0);
  CHECK(lasso_stats.counts[1] > 0);
  CHECK(lasso_stats.pass);
  MetricGraph star(Graph(4, {{0, 1}, {0, 2}, {0, 3}}), {1.0, s2, s3});
  SurplusStatistics tree_stats = surplus_statistics(star, 100);
  CHECK(tree_stats.counts == std::vector<int>{100});
  CHECK(tree_stats.pass);
}
