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


#include "cvtele/fock_oracle.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvtele/errors.hpp"

namespace cvtele {
namespace {

using oracle::TruncatedState;

FidelityQuery query(double r, double eta, double nth, NgKind k, int order, double t,
                    StrategyOrder s) {
  FidelityQuery q;
  q.r = r;
  q.channel = {eta, nth};
  q.spec = {k, order, t};
  q.order = s;
  return q;
}

double max_entry_gap(const TruncatedState& a, const TruncatedState& b) {
  return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

TEST(FockOracleTest, TmsvBasics) {
  const auto zero = oracle::oracle_tmsv(0.0, 6);
  EXPECT_EQ(zero.at(0, 0, 0, 0), Complex(1.0));
  EXPECT_NEAR(zero.trace(), 1.0, 0.0);
  const auto t = oracle::oracle_tmsv(0.5, 20);
  EXPECT_LT(t.trace_deficit, 1e-8);
  EXPECT_NEAR(t.trace(), 1.0 - t.trace_deficit, 1e-14);
  EXPECT_NEAR(t.mean_photons(0), std::pow(std::sinh(0.5), 2), 1e-7);
  EXPECT_NEAR(t.mean_photons(1), t.mean_photons(0), 1e-15);
  // |psi> = sum_n (-tanh r)^n / cosh r |n, n> up to phase convention
  const double th = std::tanh(0.5);
  EXPECT_NEAR(std::abs(t.at(3, 3, 3, 3)), std::pow(th, 6) / std::pow(std::cosh(0.5), 2),
              1e-15);
  EXPECT_EQ(t.at(1, 2, 1, 1), Complex(0.0));
  EXPECT_THROW(oracle::oracle_tmsv(0.5, 0), DomainError);
  EXPECT_THROW(oracle::oracle_tmsv(-0.1, 10), DomainError);
}

TEST(FockOracleTest, BeamSplitterBlockIsBinomial) {
  for (double t : {0.0, 0.3, 0.9, 1.0})
    for (int n = 0; n <= 8; ++n) {
      const Eigen::MatrixXd u = oracle::beam_splitter_block(t, n);
      ASSERT_EQ(u.rows(), n + 1);
      EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(n + 1, n + 1))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12);
      for (int k = 0; k <= n; ++k) {
        const double binom = std::tgamma(n + 1.0) /
                             (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
        EXPECT_NEAR(u(k, n) * u(k, n),
                    binom * std::pow(t, k) * std::pow(1.0 - t, n - k), 1e-12);
      }
    }
}

TEST(FockOracleTest, DisplacementMatchesLaguerre) {
  for (Complex a : {Complex(0.3, 0.1), Complex(-1.2, 0.8), Complex(2.5, -3.0)}) {
    const int cut = 40;
    const Eigen::MatrixXcd d = oracle::displacement_matrix(a, cut);
    const double x = std::norm(a);
    for (int j = 0; j <= cut; j += 3)
      for (int k = 0; k <= j; k += 2) {
        const int s = j - k;
        const double mag =
            std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(j + 1.0)) - x / 2) *
            std::pow(std::abs(a), s) * std::assoc_laguerre(k, s, x);
        const Complex want = mag * std::pow(a / std::abs(a), s);
        EXPECT_NEAR(std::abs(d(j, k) - want), 0.0, 1e-12) << j << "," << k;
        const Complex up = std::pow(-std::conj(a) / std::abs(a), s) * mag;
        EXPECT_NEAR(std::abs(d(k, j) - up), 0.0, 1e-12);
      }
  }
}

TEST(FockOracleTest, ChannelLimits) {
  const auto t = oracle::oracle_tmsv(0.6, 24);
  EXPECT_LT(max_entry_gap(oracle::oracle_channel(t, 0, {1.0, 0.4}), t), 1e-12);
  const auto gone = oracle::oracle_channel(t, 1, {0.0, 0.0});
  EXPECT_NEAR(gone.mean_photons(1), 0.0, 1e-14);
  EXPECT_NEAR(gone.mean_photons(0), t.mean_photons(0), 1e-12);
  EXPECT_LT(gone.min_eigenvalue(), 1.0);
  EXPECT_GT(gone.min_eigenvalue(), -1e-10);
}

TEST(FockOracleTest, ChannelMatchesGaussianCovariance) {
  auto o = oracle::oracle_tmsv(0.5, 30);
  const ChannelSpec ch{0.8, 0.1};
  o = oracle::oracle_channel(o, 0, ch);
  o = oracle::oracle_channel(o, 1, ch);
  EXPECT_NEAR(o.mean_photons(0), 0.2372322539261, 1e-10);
  EXPECT_NEAR(o.mean_photons(1), 0.8 * std::pow(std::sinh(0.5), 2) + 0.02, 1e-8);
}

TEST(FockOracleTest, HeraldingLimits) {
  const auto t = oracle::oracle_tmsv(0.4, 20);
  const auto pc = oracle::oracle_ng(t, {NgKind::kPC, 2, 1.0});
  EXPECT_NEAR(pc.probability, 1.0 - t.trace_deficit, 1e-9);
  EXPECT_LT(max_entry_gap(pc.state, t), 1e-8);
  EXPECT_THROW(oracle::oracle_ng(oracle::oracle_tmsv(0.0, 8), {NgKind::kPS, 1, 0.7}),
               ZeroProbabilityError);
}

TEST(FockOracleTest, CharacteristicFunction) {
  const auto vac = oracle::oracle_tmsv(0.0, 8);
  EXPECT_NEAR(std::abs(oracle::oracle_cf(vac, {2.0, 0.0, 0.0, 0.0}) - std::exp(-1.0)),
              0.0, 1e-10);
  const auto t = oracle::oracle_tmsv(0.5, 30);
  EXPECT_NEAR(std::abs(oracle::oracle_cf(t, {0.0, 0.0, 0.0, 0.0}) - 1.0), 0.0,
              t.trace_deficit + 1e-14);
  const double c = std::cosh(1.0) / 4, k = std::sinh(1.0) / 2;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    const std::array<double, 4> x = {u(rng), u(rng), u(rng), u(rng)};
    const double want = std::exp(-c * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) +
                                 k * (x[0] * x[2] - x[1] * x[3]));
    EXPECT_NEAR(std::abs(oracle::oracle_cf(t, x) - want), 0.0, 1e-8);
    const auto ps = oracle::oracle_ng(t, {NgKind::kPS, 1, 0.8}).state;
    const Complex plus = oracle::oracle_cf(ps, x);
    const Complex minus = oracle::oracle_cf(ps, {-x[0], -x[1], -x[2], -x[3]});
    EXPECT_NEAR(std::abs(minus - std::conj(plus)), 0.0, 1e-10);
  }
}

TEST(FockOracleTest, DensityMatricesArePhysical) {
  for (auto k : {NgKind::kPS, NgKind::kPA, NgKind::kPC})
    for (auto s : {StrategyOrder::kNgThenNc, StrategyOrder::kNcThenNg}) {
      const auto h = oracle::oracle_resource(query(0.7, 0.6, 0.1, k, 2, 0.6, s), 20);
      EXPECT_GT(h.state.min_eigenvalue(), -1e-10);
      EXPECT_LT(h.state.hermiticity_error(), 1e-12);
      EXPECT_NEAR(h.state.trace(), 1.0, 1e-12);
      EXPECT_GT(h.probability, 0.0);
      EXPECT_LE(h.probability, 1.0);
    }
}

TEST(FockOracleTest, FidelityAnchors) {
  const auto coh = oracle::OracleInput::from(InputState::coherent_state(0.0));
  const auto f = oracle::oracle_fidelity(coh, oracle::oracle_tmsv(0.5, 40));
  EXPECT_NEAR(f.fidelity, 1.0 / (1.0 + std::exp(-1.0)), 1e-7);
  EXPECT_LT(f.delta, 1e-8);
  const auto f0 = oracle::oracle_fidelity(coh, oracle::oracle_tmsv(0.0, 4));
  EXPECT_NEAR(f0.fidelity, 0.5, 1e-8);
}

TEST(FockOracleTest, PipelineMatchesFrozenAndEngine) {
  const auto q = query(0.5, 0.7, 0.1, NgKind::kPS, 1, 0.9, StrategyOrder::kNgThenNc);
  const auto o = oracle::oracle_pipeline(q);
  EXPECT_NEAR(o.fidelity, 0.6560005229805, 1e-9);
  EXPECT_NEAR(o.probability, 0.003482662893502, 1e-10);
  EXPECT_LT(o.trace_deficit, 1e-8);
  const auto e = evaluate_query(q);
  EXPECT_NEAR(e.fidelity, o.fidelity, 1e-6);
  EXPECT_NEAR(e.probability, o.probability, 1e-6);
}

TEST(FockOracleTest, CutoffConvergence) {
  for (double r : {0.1, 0.5})
    for (double eta : {0.3, 1.0})
      for (auto k : {NgKind::kPS, NgKind::kPC}) {
        const auto q = query(r, eta, 0.1, k, 1, 0.5, StrategyOrder::kNcThenNg);
        const auto a = oracle::oracle_pipeline_at(q, 24);
        const auto b = oracle::oracle_pipeline_at(q, 48);
        EXPECT_LT(std::abs(a.fidelity - b.fidelity), 1e-7);
        EXPECT_LT(std::abs(a.probability - b.probability), 1e-7);
      }
}

}  // namespace
}  // namespace cvtele
