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

#ifndef CVTELE_TELEPORT_HPP
#define CVTELE_TELEPORT_HPP

#include <complex>

#include "cvtele/nongauss.hpp"
#include "cvtele/poly_gaussian_cf.hpp"
#include "cvtele/states.hpp"

namespace cvtele {

/// State to be teleported.
struct InputState {
  enum class Kind { kCoherent, kSqueezedVacuum };
  Kind kind = Kind::kCoherent;
  Complex alpha = 0.0;
  double sigma = 0.0;

  static InputState coherent_state(Complex alpha) {
    return {Kind::kCoherent, alpha, 0.0};
  }
  static InputState squeezed_vacuum_state(double sigma) {
    return {Kind::kSqueezedVacuum, 0.0, sigma};
  }
  PolyGaussianCF cf() const;
};

/// Braunstein-Kimble unit-gain fidelity
///   F = (1/2pi) \int d^2L chi_in(L) chi_out(-L),
///   chi_out(t, s) = chi_in(t, s) chi_res(t, -s, t, s).
/// Throws ConsistencyError when the imaginary residue exceeds 1e-10.
double bk_fidelity(const PolyGaussianCF& input, const PolyGaussianCF& resource,
                   const AlgebraOptions& opts = {});

struct FidelityQuery {
  InputState input;
  double r = 0.0;
  ChannelSpec channel;
  NgSpec spec;
  StrategyOrder order = StrategyOrder::kNcOnly;
};

struct Evaluation {
  double fidelity;
  double probability;
};

/// Fidelity at the query's fixed NG transmissivity.
Evaluation evaluate_query(const FidelityQuery& q,
                          const AlgebraOptions& opts = {});

struct OptimizerSettings {
  int grid_points = 201;
  double tolerance = 1e-6;
};

struct OptResult {
  double t_star = 1.0;
  double f_star = 0.0;
  double probability_at_opt = 1.0;
  int evaluations = 0;
};

/// Maximizes fidelity over the NG transmissivity: uniform grid on [0, 1],
/// then golden-section refinement around the best grid point. Plateaus are
/// resolved toward the largest T. Heralding events of zero probability are
/// skipped; throws ZeroProbabilityError when every T is infeasible.
OptResult optimize_over_t(const FidelityQuery& q,
                          const OptimizerSettings& settings = {},
                          const AlgebraOptions& opts = {});

/// Optimal fidelity of q as used in sweeps (NC_ONLY and NONE skip the search).
OptResult optimal_fidelity(const FidelityQuery& q,
                           const OptimizerSettings& settings = {},
                           const AlgebraOptions& opts = {});

struct CrossoverResult {
  double eta_star;
  double bracket_lo;
  double bracket_hi;
  int iterations;
};

/// Gap below which two optimal-fidelity curves are reported as
/// indistinguishable when bracketing fails.
inline constexpr double kIndistinguishableGap = 1e-4;

/// Bisection on g(eta) = F*_a(eta) - F*_b(eta) to an interval of width
/// tolerance. The channel eta of both queries is overridden. Throws
/// BracketError when g has the same sign at both ends.
CrossoverResult find_crossover(const FidelityQuery& a, const FidelityQuery& b,
                               double eta_lo = 0.05, double eta_hi = 0.95,
                               double tolerance = 1e-4,
                               const OptimizerSettings& settings = {},
                               const AlgebraOptions& opts = {});

}  // namespace cvtele

#endif  // CVTELE_TELEPORT_HPP
