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

#include "cvtele/nongauss.hpp"

#include <cmath>
#include <string>

#include "cvtele/errors.hpp"

namespace cvtele {

int NgSpec::ancilla_photons() const {
  switch (kind) {
    case NgKind::kPA:
    case NgKind::kPC:
      return order;
    default:
      return 0;
  }
}

int NgSpec::detected_photons() const {
  switch (kind) {
    case NgKind::kPS:
    case NgKind::kPC:
      return order;
    default:
      return 0;
  }
}

void NgSpec::validate(int fock_cap) const {
  if (kind == NgKind::kNone) return;
  if (order < 1 || order > fock_cap) {
    throw DomainError("operation order " + std::to_string(order) +
                      " outside [1, " + std::to_string(fock_cap) + "]");
  }
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw DomainError("NG transmissivity T=" + std::to_string(transmissivity) +
                      " outside [0, 1]");
  }
}

std::string_view to_string(NgKind kind) {
  switch (kind) {
    case NgKind::kPS:
      return "ps";
    case NgKind::kPA:
      return "pa";
    case NgKind::kPC:
      return "pc";
    case NgKind::kNone:
      break;
  }
  return "none";
}

std::string_view to_string(StrategyOrder order) {
  switch (order) {
    case StrategyOrder::kNgThenNc:
      return "ng-nc";
    case StrategyOrder::kNcThenNg:
      return "nc-ng";
    case StrategyOrder::kNcOnly:
      break;
  }
  return "nc-only";
}

NgKind parse_ng_kind(std::string_view s) {
  if (s == "none") return NgKind::kNone;
  if (s == "ps") return NgKind::kPS;
  if (s == "pa") return NgKind::kPA;
  if (s == "pc") return NgKind::kPC;
  throw DomainError("unknown operation kind '" + std::string(s) +
                    "' (expected none, ps, pa, pc)");
}

StrategyOrder parse_strategy(std::string_view s) {
  if (s == "ng-nc") return StrategyOrder::kNgThenNc;
  if (s == "nc-ng") return StrategyOrder::kNcThenNg;
  if (s == "nc-only") return StrategyOrder::kNcOnly;
  throw DomainError("unknown strategy '" + std::string(s) +
                    "' (expected ng-nc, nc-ng, nc-only)");
}

Conditioned conditional_ng_one_mode(const PolyGaussianCF& state, ModeIndex mode,
                                    int ancilla_photons, int detected_photons,
                                    double transmissivity,
                                    const AlgebraOptions& opts) {
  if (mode.index < 0 || mode.index >= state.nmodes()) {
    throw DimensionError("mode index out of range for conditional operation");
  }
  const int anc = state.nmodes();
  PolyGaussianCF joint = tensor(state, fock_projector_cf(ancilla_photons));
  joint = apply_beam_splitter(joint, mode, ModeIndex{anc}, transmissivity, opts);

  // Tr_anc[rho (1 x |n><n|)] has CF (1/2pi) \int d^2L_a chi(L, L_a)
  // chi_n(-L_a); chi_n is even, so the projector CF multiplies directly.
  const PolyGaussianCF projector = fock_projector_cf(detected_photons);
  PolyGaussianCF factor = tensor(
      PolyGaussianCF(state.nmodes(),
                     Eigen::MatrixXcd::Zero(state.nvars(), state.nvars()),
                     Eigen::VectorXcd::Zero(state.nvars()),
                     MultiIndexPoly::constant(state.nvars(), 1.0)),
      projector);
  joint = multiply(joint, factor, opts);
  const int integrated[1] = {anc};
  PolyGaussianCF out = integrate_out(joint, integrated, opts);

  const Complex tr = trace(out);
  if (!(std::abs(tr) >= opts.zero_trace)) {
    throw ZeroProbabilityError(
        "heralding event has zero probability (|trace|=" +
        std::to_string(std::abs(tr)) + ")");
  }
  return {std::move(out), tr.real()};
}

Conditioned apply_symmetric_ng_ordered(const PolyGaussianCF& state,
                                       const NgSpec& spec, int first_mode,
                                       const AlgebraOptions& opts) {
  if (state.nmodes() != 2) {
    throw DimensionError("symmetric NG operation needs a two-mode state");
  }
  spec.validate();
  if (spec.kind == NgKind::kNone) return {state, 1.0};
  const int m = spec.ancilla_photons();
  const int n = spec.detected_photons();
  const int second_mode = 1 - first_mode;
  auto once = conditional_ng_one_mode(state, ModeIndex{first_mode}, m, n,
                                      spec.transmissivity, opts);
  auto twice = conditional_ng_one_mode(once.cf, ModeIndex{second_mode}, m, n,
                                       spec.transmissivity, opts);
  auto [cf, tr] = normalize(twice.cf, opts);
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr))) {
    throw ConsistencyError("success probability has an imaginary part");
  }
  return {std::move(cf), tr.real()};
}

Conditioned apply_symmetric_ng(const PolyGaussianCF& state, const NgSpec& spec,
                               const AlgebraOptions& opts) {
  return apply_symmetric_ng_ordered(state, spec, 0, opts);
}

Conditioned build_resource(double r, const ChannelSpec& ch, const NgSpec& spec,
                           StrategyOrder order, LossPath loss_path,
                           const AlgebraOptions& opts) {
  ch.validate();
  spec.validate();
  auto channel = [&](const PolyGaussianCF& s) {
    PolyGaussianCF out = apply_thermal_loss(s, ModeIndex{0}, ch, loss_path, opts);
    return apply_thermal_loss(out, ModeIndex{1}, ch, loss_path, opts);
  };
  const PolyGaussianCF start = tmsv(r);
  switch (order) {
    case StrategyOrder::kNcOnly:
      return {channel(start), 1.0};
    case StrategyOrder::kNgThenNc: {
      auto ng = apply_symmetric_ng(start, spec, opts);
      return {channel(ng.cf), ng.probability};
    }
    case StrategyOrder::kNcThenNg:
      break;
  }
  return apply_symmetric_ng(channel(start), spec, opts);
}

}  // namespace cvtele
