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

#ifndef CVTELE_STATES_HPP
#define CVTELE_STATES_HPP

#include <complex>

#include <Eigen/Dense>

#include "cvtele/poly_gaussian_cf.hpp"

namespace cvtele {

/// Position of a mode inside a multimode state (0-based).
struct ModeIndex {
  int index;
};

/// Thermal-loss channel: beam splitter of transmissivity eta = exp(-gamma t)
/// against a thermal bath with mean photon number nth.
struct ChannelSpec {
  double eta = 1.0;
  double nth = 0.0;

  void validate() const;
};

enum class LossPath {
  kClosedForm,  // chi(sqrt(eta) L) * thermal Gaussian factor
  kAncilla,     // thermal ancilla + beam splitter + partial trace
};

/// Default photon-number cap for Fock-state characteristic functions.
inline constexpr int kDefaultFockCap = 4;

/// Symplectic form Omega = diag(w, ..., w), w = [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int nmodes);

/// Gaussian CF from covariance matrix V and mean d.
PolyGaussianCF gaussian_state(const Eigen::MatrixXd& covariance,
                              const Eigen::VectorXd& mean);

PolyGaussianCF vacuum(int nmodes);
PolyGaussianCF coherent(Complex alpha);
/// Squeezed vacuum with V = diag(exp(-2 sigma), exp(2 sigma)) / 2.
PolyGaussianCF squeezed_vacuum(double sigma);
/// Thermal state with V = (2 nth + 1) / 2 * identity.
PolyGaussianCF thermal(double nth);
/// Two-mode squeezed vacuum, S(r) applied to two vacua.
PolyGaussianCF tmsv(double r);
/// CF of |n><n|: L_n((tau^2 + sigma^2) / 2) exp(-(tau^2 + sigma^2) / 4).
PolyGaussianCF fock_projector_cf(int n, int cap = kDefaultFockCap);

/// Symplectic matrices acting on (q_i, p_i, q_j, p_j).
Eigen::Matrix4d beam_splitter_matrix(double transmissivity);
Eigen::Matrix4d two_mode_squeezer_matrix(double r);

/// Embeds a 4x4 two-mode symplectic matrix at modes (i, j) of an n-mode
/// system.
Eigen::MatrixXd embed_two_mode(const Eigen::Matrix4d& s, int i, int j,
                               int nmodes);

/// Applies the Gaussian unitary with symplectic matrix S (V -> S V S^T), which
/// maps the CF as chi'(L) = chi(S^{-1} L).
PolyGaussianCF apply_symplectic(const PolyGaussianCF& state,
                                const Eigen::MatrixXd& s,
                                const AlgebraOptions& opts = {});

PolyGaussianCF apply_beam_splitter(const PolyGaussianCF& state, ModeIndex i,
                                   ModeIndex j, double transmissivity,
                                   const AlgebraOptions& opts = {});

PolyGaussianCF apply_two_mode_squeeze(const PolyGaussianCF& state, ModeIndex i,
                                      ModeIndex j, double r,
                                      const AlgebraOptions& opts = {});

PolyGaussianCF apply_thermal_loss(const PolyGaussianCF& state, ModeIndex mode,
                                  const ChannelSpec& ch,
                                  LossPath path = LossPath::kClosedForm,
                                  const AlgebraOptions& opts = {});

}  // namespace cvtele

#endif  // CVTELE_STATES_HPP
