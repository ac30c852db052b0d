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

#include "cvtele/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cvtele/errors.hpp"

namespace cvtele {

PolyGaussianCF InputState::cf() const {
  return kind == Kind::kCoherent ? coherent(alpha) : squeezed_vacuum(sigma);
}

double bk_fidelity(const PolyGaussianCF& input, const PolyGaussianCF& resource,
                   const AlgebraOptions& opts) {
  if (input.nmodes() != 1 || resource.nmodes() != 2) {
    throw DimensionError("fidelity needs a single-mode input and a two-mode "
                         "resource");
  }
  // Output CF evaluated at -L directly: resource at (-t, s, -t, -s).
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  m(2, 0) = -1.0;
  m(3, 1) = -1.0;
  const PolyGaussianCF res_part = substitute_linear(resource, m, 1, opts);
  const PolyGaussianCF in_neg =
      substitute_linear(input, -Eigen::MatrixXd::Identity(2, 2), opts);
  const PolyGaussianCF integrand =
      multiply(multiply(input, in_neg, opts), res_part, opts);
  const int modes[1] = {0};
  const Complex f = trace(integrate_out(integrand, modes, opts));
  if (std::abs(f.imag()) > 1e-10) {
    throw ConsistencyError("fidelity has imaginary residue " +
                           std::to_string(f.imag()));
  }
  return std::clamp(f.real(), 0.0, 1.0);
}

Evaluation evaluate_query(const FidelityQuery& q, const AlgebraOptions& opts) {
  const auto res = build_resource(q.r, q.channel, q.spec, q.order,
                                  LossPath::kClosedForm, opts);
  return {bk_fidelity(q.input.cf(), res.cf, opts), res.probability};
}

namespace {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

struct Probe {
  double fidelity = kInfeasible;
  double probability = 0.0;
};

Probe probe(FidelityQuery q, double t, const AlgebraOptions& opts) {
  q.spec.transmissivity = t;
  try {
    const auto e = evaluate_query(q, opts);
    return {e.fidelity, e.probability};
  } catch (const ZeroProbabilityError&) {
    return {};
  }
}

}  // namespace

OptResult optimize_over_t(const FidelityQuery& q,
                          const OptimizerSettings& settings,
                          const AlgebraOptions& opts) {
  if (q.spec.kind == NgKind::kNone) {
    const auto e = evaluate_query(q, opts);
    return {1.0, e.fidelity, e.probability, 1};
  }
  if (settings.grid_points < 2) {
    throw DomainError("optimizer needs at least 2 grid points");
  }
  OptResult best;
  best.f_star = kInfeasible;
  int best_index = -1;
  const int n = settings.grid_points;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    const Probe p = probe(q, t, opts);
    ++best.evaluations;
    if (p.fidelity != kInfeasible && p.fidelity >= best.f_star) {
      best.f_star = p.fidelity;
      best.t_star = t;
      best.probability_at_opt = p.probability;
      best_index = i;
    }
  }
  if (best_index < 0) {
    throw ZeroProbabilityError("every transmissivity on the grid is infeasible");
  }

  // Golden-section maximization on the neighbouring grid cells.
  double lo = static_cast<double>(std::max(best_index - 1, 0)) / (n - 1);
  double hi = static_cast<double>(std::min(best_index + 1, n - 1)) / (n - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  Probe pc = probe(q, c, opts);
  Probe pd = probe(q, d, opts);
  best.evaluations += 2;
  auto consider = [&](double t, const Probe& p) {
    if (p.fidelity > best.f_star) {
      best.f_star = p.fidelity;
      best.t_star = t;
      best.probability_at_opt = p.probability;
    }
  };
  consider(c, pc);
  consider(d, pd);
  while (hi - lo > settings.tolerance) {
    if (pc.fidelity >= pd.fidelity) {
      hi = d;
      d = c;
      pd = pc;
      c = hi - inv_phi * (hi - lo);
      pc = probe(q, c, opts);
      consider(c, pc);
    } else {
      lo = c;
      c = d;
      pc = pd;
      d = lo + inv_phi * (hi - lo);
      pd = probe(q, d, opts);
      consider(d, pd);
    }
    ++best.evaluations;
  }
  return best;
}

OptResult optimal_fidelity(const FidelityQuery& q,
                           const OptimizerSettings& settings,
                           const AlgebraOptions& opts) {
  if (q.order == StrategyOrder::kNcOnly || q.spec.kind == NgKind::kNone) {
    FidelityQuery base = q;
    base.order = StrategyOrder::kNcOnly;
    base.spec = NgSpec{};
    const auto e = evaluate_query(base, opts);
    return {1.0, e.fidelity, 1.0, 1};
  }
  return optimize_over_t(q, settings, opts);
}

CrossoverResult find_crossover(const FidelityQuery& a, const FidelityQuery& b,
                               double eta_lo, double eta_hi, double tolerance,
                               const OptimizerSettings& settings,
                               const AlgebraOptions& opts) {
  if (!(eta_lo >= 0.0 && eta_hi <= 1.0 && eta_lo < eta_hi)) {
    throw BracketError("invalid bracket [" + std::to_string(eta_lo) + ", " +
                       std::to_string(eta_hi) + "]");
  }
  auto gap = [&](double eta) {
    FidelityQuery qa = a, qb = b;
    qa.channel.eta = eta;
    qb.channel.eta = eta;
    return optimal_fidelity(qa, settings, opts).f_star -
           optimal_fidelity(qb, settings, opts).f_star;
  };
  double g_lo = gap(eta_lo);
  const double g_hi = gap(eta_hi);
  if ((g_lo > 0.0) == (g_hi > 0.0) || g_lo == 0.0 || g_hi == 0.0) {
    if (std::max(std::abs(g_lo), std::abs(g_hi)) < kIndistinguishableGap) {
      throw BracketError(
          "no sign change in bracket: indistinguishable curves (g(" +
          std::to_string(eta_lo) + ")=" + std::to_string(g_lo) + ", g(" +
          std::to_string(eta_hi) + ")=" + std::to_string(g_hi) + ")");
    }
    throw BracketError("no sign change in bracket: g(" +
                       std::to_string(eta_lo) + ")=" + std::to_string(g_lo) +
                       ", g(" + std::to_string(eta_hi) +
                       ")=" + std::to_string(g_hi));
  }
  double lo = eta_lo, hi = eta_hi;
  int iterations = 0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    ++iterations;
    if ((g_mid > 0.0) == (g_lo > 0.0) && g_mid != 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, iterations};
}

}  // namespace cvtele
