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

#include "cvtele/states.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cvtele/errors.hpp"

namespace cvtele {

namespace {

void check_modes(const PolyGaussianCF& state, ModeIndex i, ModeIndex j) {
  if (i.index < 0 || i.index >= state.nmodes() || j.index < 0 ||
      j.index >= state.nmodes()) {
    throw DimensionError("mode index out of range for " +
                         std::to_string(state.nmodes()) + "-mode state");
  }
  if (i.index == j.index) {
    throw DimensionError("two-mode operation needs distinct modes, got " +
                         std::to_string(i.index) + " twice");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void ChannelSpec::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("channel transmissivity eta=" + std::to_string(eta) +
                      " outside [0, 1]");
  }
  if (!(nth >= 0.0) || !std::isfinite(nth)) {
    throw DomainError("thermal photon number nth=" + std::to_string(nth) +
                      " must be >= 0");
  }
}

Eigen::MatrixXd symplectic_form(int nmodes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * nmodes, 2 * nmodes);
  for (int k = 0; k < nmodes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

PolyGaussianCF gaussian_state(const Eigen::MatrixXd& covariance,
                              const Eigen::VectorXd& mean) {
  const auto n = covariance.rows();
  if (n % 2 != 0 || covariance.cols() != n || mean.size() != n) {
    throw DimensionError("covariance/mean dimensions do not describe modes");
  }
  const int nmodes = static_cast<int>(n / 2);
  const Eigen::MatrixXd omega = symplectic_form(nmodes);
  Eigen::MatrixXd a = omega * covariance * omega.transpose();
  a = 0.5 * (a + a.transpose());
  const Eigen::VectorXcd b = Complex(0.0, -1.0) * (omega * mean).cast<Complex>();
  return PolyGaussianCF(nmodes, a.cast<Complex>(), b,
                        MultiIndexPoly::constant(2 * nmodes, 1.0));
}

PolyGaussianCF vacuum(int nmodes) {
  if (nmodes < 1) throw DomainError("vacuum needs at least one mode");
  return gaussian_state(0.5 * Eigen::MatrixXd::Identity(2 * nmodes, 2 * nmodes),
                        Eigen::VectorXd::Zero(2 * nmodes));
}

PolyGaussianCF coherent(Complex alpha) {
  Eigen::VectorXd d(2);
  d << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return gaussian_state(0.5 * Eigen::MatrixXd::Identity(2, 2), d);
}

PolyGaussianCF squeezed_vacuum(double sigma) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
  v(0, 0) = 0.5 * std::exp(-2.0 * sigma);
  v(1, 1) = 0.5 * std::exp(2.0 * sigma);
  return gaussian_state(v, Eigen::VectorXd::Zero(2));
}

PolyGaussianCF thermal(double nth) {
  if (!(nth >= 0.0)) throw DomainError("thermal photon number must be >= 0");
  return gaussian_state((nth + 0.5) * Eigen::MatrixXd::Identity(2, 2),
                        Eigen::VectorXd::Zero(2));
}

PolyGaussianCF tmsv(double r) {
  // exp[-(|L1|^2 + |L2|^2) cosh(2r)/4 + (t1 t2 - s1 s2) sinh(2r)/2]
  const double c = std::cosh(2.0 * r) / 2.0;
  const double s = std::sinh(2.0 * r) / 2.0;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) a(i, i) = c;
  a(0, 2) = a(2, 0) = -s;
  a(1, 3) = a(3, 1) = s;
  return PolyGaussianCF(2, a, Eigen::VectorXcd::Zero(4),
                        MultiIndexPoly::constant(4, 1.0));
}

PolyGaussianCF fock_projector_cf(int n, int cap) {
  if (n < 0 || n > cap) {
    throw DomainError("Fock photon number " + std::to_string(n) +
                      " outside [0, " + std::to_string(cap) + "]");
  }
  // L_n(x) = sum_k C(n,k) (-x)^k / k!, x = (tau^2 + sigma^2) / 2
  PolyAccumulator acc(2);
  double kfact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) kfact *= k;
    const double lk = binomial(n, k) * ((k % 2) ? -1.0 : 1.0) / kfact /
                      std::pow(2.0, k);
    for (int j = 0; j <= k; ++j) {
      const int e[2] = {2 * j, 2 * (k - j)};
      acc.add(MultiIndexPoly::make_key(e), lk * binomial(k, j));
    }
  }
  return PolyGaussianCF(1, 0.5 * Eigen::MatrixXcd::Identity(2, 2),
                        Eigen::VectorXcd::Zero(2), acc.finish());
}

Eigen::Matrix4d beam_splitter_matrix(double transmissivity) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw DomainError("beam splitter transmissivity T=" +
                      std::to_string(transmissivity) + " outside [0, 1]");
  }
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 2; ++k) {
    b(k, k) = t;
    b(k, 2 + k) = r;
    b(2 + k, k) = -r;
    b(2 + k, 2 + k) = t;
  }
  return b;
}

Eigen::Matrix4d two_mode_squeezer_matrix(double r) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 2; ++k) {
    const double z = (k == 0) ? 1.0 : -1.0;
    m(k, k) = c;
    m(2 + k, 2 + k) = c;
    m(k, 2 + k) = s * z;
    m(2 + k, k) = s * z;
  }
  return m;
}

Eigen::MatrixXd embed_two_mode(const Eigen::Matrix4d& s, int i, int j,
                               int nmodes) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * nmodes, 2 * nmodes);
  const int idx[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(idx[r], idx[c]) = s(r, c);
  }
  return m;
}

PolyGaussianCF apply_symplectic(const PolyGaussianCF& state,
                                const Eigen::MatrixXd& s,
                                const AlgebraOptions& opts) {
  // S^{-1} = Omega S^T Omega^T for symplectic S; exact in floating point.
  const Eigen::MatrixXd omega = symplectic_form(state.nmodes());
  const Eigen::MatrixXd sinv = omega * s.transpose() * omega.transpose();
  return substitute_linear(state, sinv, opts);
}

PolyGaussianCF apply_beam_splitter(const PolyGaussianCF& state, ModeIndex i,
                                   ModeIndex j, double transmissivity,
                                   const AlgebraOptions& opts) {
  check_modes(state, i, j);
  const Eigen::Matrix4d b = beam_splitter_matrix(transmissivity);
  return apply_symplectic(state, embed_two_mode(b, i.index, j.index,
                                                state.nmodes()),
                          opts);
}

PolyGaussianCF apply_two_mode_squeeze(const PolyGaussianCF& state, ModeIndex i,
                                      ModeIndex j, double r,
                                      const AlgebraOptions& opts) {
  check_modes(state, i, j);
  return apply_symplectic(
      state,
      embed_two_mode(two_mode_squeezer_matrix(r), i.index, j.index,
                     state.nmodes()),
      opts);
}

PolyGaussianCF apply_thermal_loss(const PolyGaussianCF& state, ModeIndex mode,
                                  const ChannelSpec& ch, LossPath path,
                                  const AlgebraOptions& opts) {
  ch.validate();
  if (mode.index < 0 || mode.index >= state.nmodes()) {
    throw DimensionError("mode index out of range for thermal loss");
  }
  if (path == LossPath::kAncilla) {
    const int anc = state.nmodes();
    PolyGaussianCF joint = tensor(state, thermal(ch.nth));
    joint = apply_beam_splitter(joint, mode, ModeIndex{anc}, ch.eta, opts);
    const int traced[1] = {anc};
    return trace_out(joint, traced, opts);
  }
  // chi(sqrt(eta) L_k) exp(-(1-eta)(2 nth + 1)|L_k|^2 / 4); the diagonal map
  // is applied directly since it is singular at eta = 0.
  const int n = state.nvars();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  d(2 * mode.index) = d(2 * mode.index + 1) = std::sqrt(ch.eta);
  const Eigen::VectorXcd dc = d.cast<Complex>();
  Eigen::MatrixXcd a = dc.asDiagonal() * state.a() * dc.asDiagonal();
  const double noise = (1.0 - ch.eta) * (2.0 * ch.nth + 1.0) / 2.0;
  a(2 * mode.index, 2 * mode.index) += noise;
  a(2 * mode.index + 1, 2 * mode.index + 1) += noise;
  Eigen::VectorXcd b = dc.asDiagonal() * state.b();
  MultiIndexPoly poly =
      state.poly().compose_linear(Eigen::MatrixXd(d.asDiagonal()));
  poly.prune(opts.prune_rel_tol);
  return PolyGaussianCF(state.nmodes(), 0.5 * (a + a.transpose()), b,
                        std::move(poly), state.weight());
}

}  // namespace cvtele
