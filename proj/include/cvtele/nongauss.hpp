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

#ifndef CVTELE_NONGAUSS_HPP
#define CVTELE_NONGAUSS_HPP

#include <string>
#include <string_view>

#include "cvtele/poly_gaussian_cf.hpp"
#include "cvtele/states.hpp"

namespace cvtele {

enum class NgKind { kNone, kPS, kPA, kPC };

/// Conditional non-Gaussian operation: ancilla |m> mixed at a beam splitter
/// of transmissivity T, n photons detected in the ancilla output.
///   PS: m = 0, n = order;  PA: m = order, n = 0;  PC: m = n = order.
struct NgSpec {
  NgKind kind = NgKind::kNone;
  int order = 1;
  double transmissivity = 1.0;

  int ancilla_photons() const;
  int detected_photons() const;
  void validate(int fock_cap = kDefaultFockCap) const;
};

enum class StrategyOrder { kNgThenNc, kNcThenNg, kNcOnly };

std::string_view to_string(NgKind kind);
std::string_view to_string(StrategyOrder order);
NgKind parse_ng_kind(std::string_view s);
StrategyOrder parse_strategy(std::string_view s);

struct Conditioned {
  PolyGaussianCF cf;
  double probability;
};

/// Single-mode conditional operation of the heralded scheme. Returns the
/// unnormalized post-measurement CF and its trace (the success probability).
/// Throws ZeroProbabilityError when the heralding event has probability 0.
Conditioned conditional_ng_one_mode(const PolyGaussianCF& state, ModeIndex mode,
                                    int ancilla_photons, int detected_photons,
                                    double transmissivity,
                                    const AlgebraOptions& opts = {});

/// Applies spec to every mode of a two-mode state; returns the normalized CF
/// and the joint success probability.
Conditioned apply_symmetric_ng(const PolyGaussianCF& state, const NgSpec& spec,
                               const AlgebraOptions& opts = {});

/// Same as apply_symmetric_ng but conditioning the modes in a chosen order.
Conditioned apply_symmetric_ng_ordered(const PolyGaussianCF& state,
                                       const NgSpec& spec, int first_mode,
                                       const AlgebraOptions& opts = {});

/// TMSV(r) followed by the NG operation and the thermal-loss channel on both
/// modes in the order given by strategy.
Conditioned build_resource(double r, const ChannelSpec& ch, const NgSpec& spec,
                           StrategyOrder order,
                           LossPath loss_path = LossPath::kClosedForm,
                           const AlgebraOptions& opts = {});

}  // namespace cvtele

#endif  // CVTELE_NONGAUSS_HPP
