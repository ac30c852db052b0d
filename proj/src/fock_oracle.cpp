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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cvtele/errors.hpp"

namespace cvtele::oracle {

namespace {

constexpr double kZeroProbability = 1e-30;

bool in_range(int n, int d) { return n >= 0 && n < d; }

// blocks[N] for N = 0..max_total
std::vector<Eigen::MatrixXd> bs_blocks(double transmissivity, int max_total) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(max_total) + 1);
  for (int n = 0; n <= max_total; ++n) {
    out.push_back(beam_splitter_block(transmissivity, n));
  }
  return out;
}

// rho -> sum_s M_s rho M_s^dagger where M_s shifts `mode` by s and
// ops[s + offset](x, y) = sum_k K_k(x) conj(K_k(y)).  Returns dropped
// diagonal mass.
double apply_shift_map(const TruncatedState& in, TruncatedState& out,
                       int mode, const std::vector<Eigen::MatrixXd>& ops,
                       int offset) {
  const int d = in.dim();
  double dropped = 0.0;
  for (int a1 = 0; a1 < d; ++a1) {
    for (int a2 = 0; a2 < d; ++a2) {
      const int lo = std::max(0, a1 - a2);
      const int hi = std::min(d, a1 - a2 + d);
      for (int b1 = lo; b1 < hi; ++b1) {
        const Complex v = in.get(a1, a2, b1);
        if (v == Complex(0.0)) continue;
        const int b2 = a2 + b1 - a1;
        const int x = mode == 0 ? a1 : a2;
        const int y = mode == 0 ? b1 : b2;
        for (std::size_t k = 0; k < ops.size(); ++k) {
          const Eigen::MatrixXd& m = ops[k];
          if (m.size() == 0) continue;
          const double w = m(x, y);
          if (w == 0.0) continue;
          const int s = static_cast<int>(k) - offset;
          if (!in_range(x + s, d) || !in_range(y + s, d)) {
            if (a1 == b1 && a2 == b2) dropped += w * v.real();
            continue;
          }
          if (mode == 0) {
            out.ref(a1 + s, a2, b1 + s) += w * v;
          } else {
            out.ref(a1, a2 + s, b1) += w * v;
          }
        }
      }
    }
  }
  return dropped;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    j(k, k - 1) = j(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd w = es.eigenvectors().row(0).transpose().array().square() *
                      std::sqrt(std::numbers::pi);
  return {es.eigenvalues(), w};
}

double fidelity_at(const OracleInput& input, const TruncatedState& res,
                   int n) {
  auto [x, w] = gauss_hermite(n);
  const double st = 1.0 / std::sqrt(input.c_tau);
  const double ss = 1.0 / std::sqrt(input.c_sigma);
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tau = x(i) * st;
    for (int j = 0; j < n; ++j) {
      const double sig = x(j) * ss;
      const Complex in = input.cf(tau, sig) * input.cf(-tau, -sig);
      const double gauss = std::exp(-input.c_tau * tau * tau -
                                    input.c_sigma * sig * sig);
      const Complex r = oracle_cf(res, {-tau, sig, -tau, -sig});
      acc += w(i) * w(j) * (in / gauss) * r;
    }
  }
  return acc.real() * st * ss / (2.0 * std::numbers::pi);
}

}  // namespace

TruncatedState::TruncatedState(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw DomainError("cutoff must be nonnegative");
  const std::size_t d = static_cast<std::size_t>(cutoff) + 1;
  data_.assign(d * d * d, Complex(0.0));
}

Complex TruncatedState::at(int a1, int a2, int b1, int b2) const {
  const int d = dim();
  if (!in_range(a1, d) || !in_range(a2, d) || !in_range(b1, d) ||
      !in_range(b2, d)) {
    throw DimensionError("Fock index beyond cutoff");
  }
  if (a1 - a2 != b1 - b2) return 0.0;
  return data_[index(a1, a2, b1)];
}

Complex& TruncatedState::ref(int a1, int a2, int b1) {
  return data_[index(a1, a2, b1)];
}

double TruncatedState::trace() const {
  double t = 0.0;
  for (int a1 = 0; a1 < dim(); ++a1)
    for (int a2 = 0; a2 < dim(); ++a2) t += get(a1, a2, a1).real();
  return t;
}

double TruncatedState::mean_photons(int mode) const {
  double t = 0.0;
  for (int a1 = 0; a1 < dim(); ++a1)
    for (int a2 = 0; a2 < dim(); ++a2)
      t += (mode == 0 ? a1 : a2) * get(a1, a2, a1).real();
  return t;
}

void TruncatedState::scale(double s) {
  for (auto& v : data_) v *= s;
}

double TruncatedState::hermiticity_error() const {
  double err = 0.0;
  const int d = dim();
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = 0; a2 < d; ++a2)
      for (int b1 = std::max(0, a1 - a2); b1 < std::min(d, a1 - a2 + d); ++b1) {
        const int b2 = a2 + b1 - a1;
        err = std::max(err, std::abs(get(a1, a2, b1) -
                                     std::conj(get(b1, b2, a1))));
      }
  return err;
}

double TruncatedState::min_eigenvalue() const {
  const int d = dim();
  double lo = 0.0;
  bool first = true;
  // block q = n1 - n2, basis index = min(n1, n2)
  for (int q = -(d - 1); q <= d - 1; ++q) {
    const int size = d - std::abs(q);
    Eigen::MatrixXcd blk(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        const int a1 = q >= 0 ? i + q : i, a2 = q >= 0 ? i : i - q;
        const int b1 = q >= 0 ? j + q : j;
        blk(i, j) = get(a1, a2, b1);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk,
                                                       Eigen::EigenvaluesOnly);
    const double m = es.eigenvalues().minCoeff();
    lo = first ? m : std::min(lo, m);
    first = false;
  }
  return lo;
}

Eigen::MatrixXcd TruncatedState::dense() const {
  const int d = dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = 0; a2 < d; ++a2)
      for (int b1 = std::max(0, a1 - a2); b1 < std::min(d, a1 - a2 + d); ++b1) {
        const int b2 = a2 + b1 - a1;
        m(a1 * d + a2, b1 * d + b2) = get(a1, a2, b1);
      }
  return m;
}

Eigen::MatrixXd beam_splitter_block(double transmissivity, int total) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw DomainError("beam splitter transmissivity outside [0, 1]");
  }
  if (total < 0) throw DomainError("negative photon number");
  const int n = total + 1;
  // U = exp(theta (a^dag b - a b^dag)) = Phi exp(-i theta J) Phi^-1,
  // Phi = diag(i^k), J real tridiagonal
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    j(k + 1, k) = j(k, k + 1) =
        std::sqrt(static_cast<double>(k + 1) * (total - k));
  }
  const double theta = std::acos(std::sqrt(transmissivity));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd ph(n);
  for (int l = 0; l < n; ++l) {
    ph(l) = std::exp(Complex(0.0, -theta * es.eigenvalues()(l)));
  }
  Eigen::MatrixXcd e = q.cast<Complex>() * ph.asDiagonal() *
                       q.transpose().cast<Complex>();
  static const Complex ipow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  Eigen::MatrixXd u(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      u(r, c) = (ipow[((r - c) % 4 + 4) % 4] * e(r, c)).real();
    }
  }
  return u;
}

Eigen::MatrixXcd displacement_matrix(Complex alpha, int cutoff) {
  // <k+d|D|k> = e^{-x/2} alpha^d sqrt(k!/(k+d)!) L_k^(d)(x), x = |alpha|^2,
  // via the normalized Laguerre recurrence in k; the upper triangle uses
  // <k|D(alpha)|k+d> = conj(<k+d|D(-alpha)|k>)
  const int d = cutoff + 1;
  const double x = std::norm(alpha);
  const double mag = std::abs(alpha);
  const Complex phase = mag > 0.0 ? alpha / mag : Complex(1.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  std::vector<double> g(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) {
    if (s > 0 && mag == 0.0) break;
    const double logpre = -0.5 * x +
                          (s > 0 ? s * std::log(mag) : 0.0) -
                          0.5 * std::lgamma(s + 1.0);
    // g_n = sqrt(n! s!/(n+s)!) L_n^(s)(x)
    g[0] = 1.0;
    if (d - s > 1) g[1] = (1.0 + s - x) / std::sqrt(s + 1.0);
    for (int n = 1; n + 1 < d - s; ++n) {
      g[n + 1] = ((2.0 * n + 1.0 + s - x) * g[n] -
                  std::sqrt(static_cast<double>(n) * (n + s)) * g[n - 1]) /
                 std::sqrt((n + 1.0) * (n + 1.0 + s));
    }
    const Complex ph = std::pow(phase, s);
    for (int n = 0; n < d - s; ++n) {
      const double v = g[n] == 0.0 ? 0.0
                                   : std::copysign(
                                         std::exp(logpre + std::log(std::abs(g[n]))),
                                         g[n]);
      m(n + s, n) = ph * v;
      if (s > 0) m(n, n + s) = std::conj(ph * (s % 2 ? -v : v));
    }
  }
  return m;
}

TruncatedState oracle_tmsv(double r, int cutoff) {
  if (cutoff < 1) throw DomainError("TMSV cutoff must be at least 1");
  if (!std::isfinite(r) || r < 0.0) throw DomainError("squeezing r must be >= 0");
  TruncatedState s(cutoff);
  const double lam = std::tanh(r);
  const double c0 = 1.0 / std::cosh(r);
  std::vector<double> c(static_cast<std::size_t>(cutoff) + 1);
  for (int k = 0; k <= cutoff; ++k) c[k] = c0 * std::pow(lam, k);
  for (int j = 0; j <= cutoff; ++j)
    for (int k = 0; k <= cutoff; ++k) s.ref(j, j, k) = c[j] * c[k];
  s.trace_deficit = std::pow(lam, 2.0 * (cutoff + 1));
  return s;
}

TruncatedState oracle_channel(const TruncatedState& state, int mode,
                              const ChannelSpec& ch) {
  ch.validate();
  if (mode != 0 && mode != 1) throw DimensionError("mode must be 0 or 1");
  const int cut = state.cutoff();
  const int d = state.dim();
  // thermal ancilla, truncated at the same cutoff
  std::vector<double> p(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    p[a] = std::pow(ch.nth, a) / std::pow(ch.nth + 1.0, a + 1);
  }
  const auto blocks = bs_blocks(ch.eta, 2 * cut);
  // shift s = a - l in [-cut, cut]
  std::vector<Eigen::MatrixXd> ops(static_cast<std::size_t>(2 * cut + 1));
  for (int a = 0; a < d; ++a) {
    if (p[a] == 0.0) continue;
    for (int s = -cut; s <= a; ++s) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      for (int x = std::max(0, -s); x < d; ++x) {
        v(x) = blocks[x + a](x + s, x);
      }
      auto& m = ops[static_cast<std::size_t>(s + cut)];
      if (m.size() == 0) m = Eigen::MatrixXd::Zero(d, d);
      m += p[a] * v * v.transpose();
    }
  }
  const double before = state.trace();
  TruncatedState out(cut);
  apply_shift_map(state, out, mode, ops, cut);
  const double after = out.trace();
  out.trace_deficit = 1.0 - (1.0 - state.trace_deficit) * (after / before);
  return out;
}

Heralded oracle_ng(const TruncatedState& state, const NgSpec& spec) {
  spec.validate();
  if (spec.kind == NgKind::kNone) return {state, 1.0};
  const int m = spec.ancilla_photons();
  const int n = spec.detected_photons();
  const int cut = state.cutoff();
  const int d = state.dim();
  const auto blocks = bs_blocks(spec.transmissivity, cut + m);
  // single Kraus operator K|x> = <x+m-n, n| U |x, m> |x+m-n>
  Eigen::VectorXd k = Eigen::VectorXd::Zero(d);
  for (int x = 0; x < d; ++x) {
    if (x + m - n >= 0) k(x) = blocks[x + m](x + m - n, x);
  }
  const int s = m - n;
  std::vector<Eigen::MatrixXd> ops(static_cast<std::size_t>(2 * cut + 1));
  ops[static_cast<std::size_t>(s + cut)] = k * k.transpose();

  const double before = state.trace();
  TruncatedState mid(cut);
  double dropped = apply_shift_map(state, mid, 0, ops, cut);
  TruncatedState out(cut);
  dropped += apply_shift_map(mid, out, 1, ops, cut);
  const double prob = out.trace() / before;
  if (!(prob >= kZeroProbability)) {
    throw ZeroProbabilityError("heralding event has zero probability (p=" +
                               std::to_string(prob) + ")");
  }
  out.scale(1.0 / out.trace());
  const double leak = dropped / before / prob;
  out.trace_deficit = 1.0 - (1.0 - state.trace_deficit) * (1.0 - leak);
  return {std::move(out), prob};
}

Complex oracle_cf(const TruncatedState& state, const std::array<double, 4>& x) {
  const int d = state.dim();
  const double h = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd d1 =
      displacement_matrix(Complex(x[0], x[1]) * h, state.cutoff());
  const Eigen::MatrixXcd d2 =
      displacement_matrix(Complex(x[2], x[3]) * h, state.cutoff());
  Complex acc = 0.0;
  for (int a1 = 0; a1 < d; ++a1) {
    for (int a2 = 0; a2 < d; ++a2) {
      const int lo = std::max(0, a1 - a2);
      const int hi = std::min(d, a1 - a2 + d);
      for (int b1 = lo; b1 < hi; ++b1) {
        acc += state.get(a1, a2, b1) * d1(b1, a1) * d2(a2 + b1 - a1, a2);
      }
    }
  }
  return acc;
}

OracleInput OracleInput::from(const InputState& in) {
  if (in.kind == InputState::Kind::kCoherent) {
    const Complex beta = in.alpha;
    return {[beta](double tau, double sig) {
              const Complex a = Complex(tau, sig) / std::sqrt(2.0);
              return std::exp(-0.5 * std::norm(a) + a * std::conj(beta) -
                              std::conj(a) * beta);
            },
            0.5, 0.5};
  }
  const double s = in.sigma;
  const double e2 = std::exp(2.0 * s);
  return {[e2](double tau, double sig) {
            return Complex(std::exp(-0.25 * (e2 * tau * tau + sig * sig / e2)));
          },
          0.5 * e2, 0.5 / e2};
}

FidelityEstimate oracle_fidelity(const OracleInput& input,
                                 const TruncatedState& resource,
                                 const QuadratureSettings& q) {
  int n = q.initial_nodes;
  double prev = fidelity_at(input, resource, n);
  while (true) {
    const int next = (3 * n + 1) / 2;
    if (next > q.max_nodes) break;
    const double cur = fidelity_at(input, resource, next);
    const double delta = std::abs(cur - prev);
    if (delta < q.tolerance) return {cur, next, delta};
    prev = cur;
    n = next;
  }
  throw ConvergenceError("fidelity quadrature did not converge within " +
                         std::to_string(q.max_nodes) + " nodes per axis");
}

Heralded oracle_resource(const FidelityQuery& q, int cutoff) {
  q.channel.validate();
  q.spec.validate();
  auto normalized = [](TruncatedState s) {
    s.scale(1.0 / s.trace());
    return s;
  };
  auto channel = [&](const TruncatedState& s) {
    return normalized(
        oracle_channel(oracle_channel(s, 0, q.channel), 1, q.channel));
  };
  TruncatedState s = normalized(oracle_tmsv(q.r, cutoff));
  switch (q.order) {
    case StrategyOrder::kNcOnly:
      return {channel(s), 1.0};
    case StrategyOrder::kNgThenNc: {
      auto h = oracle_ng(s, q.spec);
      return {channel(h.state), h.probability};
    }
    case StrategyOrder::kNcThenNg:
      break;
  }
  return oracle_ng(channel(s), q.spec);
}

OracleResult oracle_pipeline_at(const FidelityQuery& q, int cutoff,
                                const QuadratureSettings& quad) {
  Heralded h = oracle_resource(q, cutoff);
  const auto f = oracle_fidelity(OracleInput::from(q.input), h.state, quad);
  return {f.fidelity, h.probability, cutoff, h.state.trace_deficit};
}

OracleResult oracle_pipeline(const FidelityQuery& q, const CutoffPolicy& policy,
                             const QuadratureSettings& quad) {
  auto attempt = [&](int cutoff) -> std::optional<OracleResult> {
    try {
      return oracle_pipeline_at(q, cutoff, quad);
    } catch (const ConvergenceError&) {
      if (cutoff >= policy.cap) throw;
      return std::nullopt;
    }
  };
  int cutoff = std::min(policy.start, policy.cap);
  std::optional<OracleResult> prev = attempt(cutoff);
  while (cutoff < policy.cap) {
    cutoff = std::min(2 * cutoff, policy.cap);
    std::optional<OracleResult> cur = attempt(cutoff);
    if (prev && cur && cur->trace_deficit < policy.deficit_bound &&
        std::abs(cur->fidelity - prev->fidelity) < policy.fidelity_delta &&
        std::abs(cur->probability - prev->probability) <
            policy.fidelity_delta) {
      return *cur;
    }
    prev = cur;
  }
  throw ConvergenceError("Fock cutoff policy did not converge below cap " +
                         std::to_string(policy.cap));
}

}  // namespace cvtele::oracle
