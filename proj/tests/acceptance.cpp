// Copyright 2026 The cvteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvtele/errors.hpp"
#include "cvtele/sweep.hpp"
#include "cvtele/teleport.hpp"
#include "test_util.hpp"

namespace {

using namespace cvtele;

struct Outcome {
  bool pass;
  std::string detail;
};

FidelityQuery query(InputState in, double r, double eta, double nth, NgKind k,
                    int order, double t, StrategyOrder s) {
  FidelityQuery q;
  q.input = in;
  q.r = r;
  q.channel = {eta, nth};
  q.spec = {k, order, t};
  q.order = s;
  return q;
}

const InputState kCoherent = InputState::coherent_state(0.0);
const InputState kSqueezed = InputState::squeezed_vacuum_state(0.6);

std::vector<double> eta_axis(double start) {
  return AxisGrid{start, 1.0, 0.05}.values();
}

std::vector<OptResult> optimize_all(const std::vector<FidelityQuery>& qs) {
  std::vector<OptResult> out(qs.size());
  parallel_for(qs.size(), worker_threads_from_env(),
               [&](std::size_t i) { out[i] = optimal_fidelity(qs[i]); });
  return out;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome baseline_closed_form() {
  double worst = 0.0;
  for (double r : {0.0, 0.25, 0.5, 1.0}) {
    const double f = evaluate_query(query(kCoherent, r, 1.0, 0.0, NgKind::kNone, 1,
                                          1.0, StrategyOrder::kNcOnly))
                         .fidelity;
    worst = std::max(worst, std::abs(f - 1.0 / (1.0 + std::exp(-2 * r))));
  }
  return {worst <= 1e-9, fmt("max |F - 1/(1+e^-2r)| = %.2e", worst)};
}

Outcome classical_plateau() {
  std::vector<FidelityQuery> qs;
  for (double eta : {0.1, 0.2, 0.3})
    qs.push_back(query(kCoherent, 0.1, eta, 0.1, NgKind::kPS, 1, 1.0,
                       StrategyOrder::kNcThenNg));
  double worst = 0.0;
  for (const auto& r : optimize_all(qs)) worst = std::max(worst, std::abs(r.f_star - 0.5));
  return {worst <= 5e-3, fmt("max |F* - 0.5| = %.2e", worst)};
}

Outcome crossover_anchor() {
  const auto a = query(kCoherent, 0.1, 0.5, 0.1, NgKind::kPS, 1, 1.0,
                       StrategyOrder::kNgThenNc);
  auto b = a;
  b.order = StrategyOrder::kNcThenNg;
  const auto c = find_crossover(a, b);
  return {std::abs(c.eta_star - 0.37) <= 0.03, fmt("eta* = %.6f", c.eta_star)};
}

Outcome unit_transmissivity_limits() {
  double worst_pc = 0.0;
  int points = 0;
  for (double r : {0.1, 0.5, 0.9})
    for (double eta : {0.3, 0.7, 1.0}) {
      ++points;
      const double base = evaluate_query(query(kCoherent, r, eta, 0.1, NgKind::kNone,
                                               1, 1.0, StrategyOrder::kNcOnly))
                              .fidelity;
      for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg})
        for (int order = 1; order <= 2; ++order) {
          const double f =
              evaluate_query(query(kCoherent, r, eta, 0.1, NgKind::kPC, order, 1.0, s))
                  .fidelity;
          worst_pc = std::max(worst_pc, std::abs(f - base));
        }
    }
  double worst_ps = 0.0;
  for (double r : {0.1, 0.5, 0.9})
    for (double eta : {0.3, 0.7}) {
      const double t = 1.0 - 1e-6;
      const double f1 = evaluate_query(query(kCoherent, r, eta, 0.0, NgKind::kPS, 1, t,
                                             StrategyOrder::kNgThenNc))
                            .fidelity;
      const double f2 = evaluate_query(query(kCoherent, r, eta, 0.0, NgKind::kPS, 1, t,
                                             StrategyOrder::kNcThenNg))
                            .fidelity;
      worst_ps = std::max(worst_ps, std::abs(f1 - f2));
    }
  return {worst_pc <= 1e-10 && worst_ps < 1e-6,
          fmt("(a) %g points, max |F_PC(T=1) - F_NC| = %.2e; (b) max |dF| = %.2e",
              points, worst_pc, worst_ps)};
}

Outcome addition_detrimental() {
  std::vector<FidelityQuery> pa, base;
  for (auto in : {kCoherent, kSqueezed})
    for (double r : {0.1, 0.5, 0.9})
      for (double eta : eta_axis(0.2))
        for (double nth : {1e-5, 0.1}) {
          base.push_back(query(in, r, eta, nth, NgKind::kNone, 1, 1.0,
                               StrategyOrder::kNcOnly));
          for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg})
            for (int order = 1; order <= 2; ++order)
              pa.push_back(query(in, r, eta, nth, NgKind::kPA, order, 1.0, s));
        }
  const auto b = optimize_all(base);
  const auto p = optimize_all(pa);
  double worst = -1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, p[i].f_star - b[i / 4].f_star);
  }
  return {worst <= 1e-9, fmt("%g PA optimizations, max (F*_PA - F_NC) = %.2e",
                             static_cast<double>(p.size()), worst)};
}

Outcome monotone_in_eta() {
  const auto etas = eta_axis(0.05);
  std::vector<FidelityQuery> qs;
  std::vector<std::string> labels;
  auto add_curve = [&](NgKind k, int order, StrategyOrder s, double r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%d %s r=%g", std::string(to_string(k)).c_str(),
                  order, std::string(to_string(s)).c_str(), r);
    labels.emplace_back(buf);
    for (double eta : etas) qs.push_back(query(kCoherent, r, eta, 1e-5, k, order, 1.0, s));
  };
  for (auto k : {NgKind::kPS, NgKind::kPC})
    for (int order = 1; order <= 2; ++order)
      for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg})
        for (double r : {0.1, 0.5, 0.9}) add_curve(k, order, s, r);
  for (double r : {0.1, 0.5, 0.9}) add_curve(NgKind::kNone, 0, StrategyOrder::kNcOnly, r);
  const auto res = optimize_all(qs);
  double worst_drop = 0.0;
  std::string worst_at = "none";
  int bad_curves = 0;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    bool bad = false;
    for (std::size_t i = 1; i < etas.size(); ++i) {
      const std::size_t at = c * etas.size() + i;
      const double drop = res[at - 1].f_star - res[at].f_star;
      bad = bad || drop > 1e-6;
      if (drop > worst_drop) {
        worst_drop = drop;
        worst_at = labels[c] + fmt(" eta %g->%g", etas[i - 1], etas[i]);
      }
    }
    if (bad) ++bad_curves;
  }
  return {worst_drop <= 1e-6,
          fmt("%g curves, %g with a step decrease > 1e-6; largest %.2e at ",
              static_cast<double>(labels.size()), bad_curves, worst_drop) +
              worst_at};
}

int sign_changes(const std::vector<double>& g, std::size_t* first = nullptr) {
  int changes = 0;
  int prev = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int s = g[i] > 1e-12 ? 1 : (g[i] < -1e-12 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) {
      if (changes == 0 && first) *first = i;
      ++changes;
    }
    prev = s;
  }
  return changes;
}

Outcome squeezed_family() {
  const auto etas = eta_axis(0.05);
  const std::vector<double> rs = {0.1, 0.5, 0.9};
  std::vector<FidelityQuery> qs;
  for (double nth : {1e-5, 0.1})
    for (double r : rs)
      for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg})
        for (double eta : etas)
          qs.push_back(query(kSqueezed, r, eta, nth, NgKind::kPS, 1, 1.0, s));
  const auto res = optimize_all(qs);
  const std::size_t n = etas.size();
  auto curve = [&](int t, std::size_t ri, int s) {
    std::vector<double> f;
    const std::size_t base = ((static_cast<std::size_t>(t) * rs.size() + ri) * 2 +
                              static_cast<std::size_t>(s)) * n;
    for (std::size_t i = 0; i < n; ++i) f.push_back(res[base + i].f_star);
    return f;
  };
  double cold_gap = 0.0, plateau_spread = 0.0;
  bool one_crossing = true;
  for (std::size_t ri = 0; ri < rs.size(); ++ri) {
    const auto a = curve(0, ri, 0), b = curve(0, ri, 1);
    for (std::size_t i = 0; i < n; ++i) cold_gap = std::max(cold_gap, std::abs(a[i] - b[i]));
    const auto ha = curve(1, ri, 0), hb = curve(1, ri, 1);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = ha[i] - hb[i];
    std::size_t cross = 0;
    if (sign_changes(g, &cross) != 1) {
      one_crossing = false;
      continue;
    }
    // plateau: the upper curve ahead of the crossing
    const auto lo = std::min_element(hb.begin(), hb.begin() + static_cast<long>(cross));
    const auto hi = std::max_element(hb.begin(), hb.begin() + static_cast<long>(cross));
    plateau_spread = std::max(plateau_spread, *hi - *lo);
  }
  return {cold_gap <= 2e-3 && one_crossing && plateau_spread <= 5e-3,
          fmt("low-T max gap %.2e; high-T plateau spread %.2e", cold_gap, plateau_spread) +
              (one_crossing ? "; one crossing per r" : "; crossing count != 1")};
}

Outcome oracle_equivalence() {
  const auto v = run_validation(validation_preset("standard"), worker_threads_from_env());
  double df = 0.0, dp = 0.0;
  int failed = 0;
  for (const auto& p : v) {
    if (!p.pass) ++failed;
    df = std::max(df, std::abs(p.f_engine - p.f_oracle));
    dp = std::max(dp, std::abs(p.p_engine - p.p_oracle));
  }
  return {failed == 0 && v.size() >= 72,
          fmt("%g points, max |dF| = %.2e, max |dp| = %.2e",
              static_cast<double>(v.size()), df, dp) +
              (failed ? " (" + std::to_string(failed) + " failed)" : "")};
}

Outcome algebra_properties() {
  std::mt19937_64 rng(20260101);
  namespace tu = cvtele::testing;
  auto rel = [](Complex a, Complex b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
  };
  double lin = 0.0, fub = 0.0, comp = 0.0, herm = 0.0, quad = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto c1 = tu::random_cf(rng, 2, 5, 12);
    const auto p2 = tu::random_poly(rng, 4, 5, 12);
    const PolyGaussianCF c2(2, c1.a(), c1.b(), p2, c1.weight());
    const Complex al(0.7, -0.2), be(-1.3, 0.4);
    const PolyGaussianCF mix(2, c1.a(), c1.b(), al * c1.poly() + be * p2, c1.weight());
    const int m1[1] = {1};
    const auto i1 = integrate_out(c1, m1), i2 = integrate_out(c2, m1),
               im = integrate_out(mix, m1);
    auto z = tu::random_point(rng, 2);
    lin = std::max(lin, rel(evaluate(im, z), al * evaluate(i1, z) + be * evaluate(i2, z)));

    const auto c3 = tu::random_cf(rng, 3, 4, 12);
    const int both[2] = {1, 2};
    const auto seq = integrate_out(integrate_out(c3, m1), m1);
    fub = std::max(fub, rel(evaluate(seq, z), evaluate(integrate_out(c3, both), z)));

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(4, 4), b(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        a(i, k) = u(rng) + (i == k ? 2.0 : 0.0);
        b(i, k) = u(rng) + (i == k ? 2.0 : 0.0);
      }
    const auto x = tu::random_point(rng, 4, 0.5);
    comp = std::max(comp, rel(evaluate(substitute_linear(substitute_linear(c1, a), b), x),
                              evaluate(substitute_linear(c1, a * b), x)));
  }
  for (auto k : {NgKind::kPS, NgKind::kPA, NgKind::kPC})
    for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg}) {
      const auto res = build_resource(0.7, {0.6, 0.1}, {k, 2, 0.7}, s);
      herm = std::max(herm, tu::hermiticity_gap(res.cf, rng, 100));
    }
  for (int trial = 0; trial < 20; ++trial) {
    const auto cf = tu::random_cf(rng, 2, 6, 15, 0.8);
    const int m0[1] = {0};
    const auto out = integrate_out(cf, m0);
    const auto z = tu::random_point(rng, 2, 1.0);
    const Complex q = tu::integrate_2d(
                          [&](double y1, double y2) {
                            const std::vector<double> p = {y1, y2, z[0], z[1]};
                            return evaluate(cf, p);
                          },
                          14.0, 14, 12) /
                      (2 * std::numbers::pi);
    quad = std::max(quad, std::abs(evaluate(out, z) - q) / std::max(std::abs(q), 1e-3));
  }
  const bool ok = lin <= 1e-10 && fub <= 1e-10 && comp <= 1e-12 && herm <= 1e-10 &&
                  quad <= 1e-6;
  return {ok, fmt("linearity %.1e, Fubini %.1e, composition %.1e", lin, fub, comp) +
                  fmt(", Hermitian %.1e, quadrature %.1e", herm, quad)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 baseline closed form", baseline_closed_form},
      {"2 classical plateau (NC 1-PS, r=0.1, nth=0.1)", classical_plateau},
      {"3 crossover anchor (assumes r=0.1 panel)", crossover_anchor},
      {"4 unit-transmissivity degeneracies", unit_transmissivity_limits},
      {"5 photon addition never beats baseline", addition_detrimental},
      {"6 optimal fidelity nondecreasing in eta (nth=1e-5)", monotone_in_eta},
      {"7 squeezed-input 1-PS family", squeezed_family},
      {"8 engine matches Fock oracle (standard preset)", oracle_equivalence},
      {"9 algebra invariants (seeded)", algebra_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("acceptance: %zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
