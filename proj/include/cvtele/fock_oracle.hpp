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


#ifndef CVTELE_FOCK_ORACLE_HPP
#define CVTELE_FOCK_ORACLE_HPP

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cvtele/nongauss.hpp"
#include "cvtele/states.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele::oracle {

// Two-mode density matrix truncated at `cutoff` photons per mode (basis
// 0..cutoff).  Only entries with n1 - n2 == m1 - m2 are stored: every
// state and operation here commutes with exp(i phi (n1 - n2)).
class TruncatedState {
 public:
  explicit TruncatedState(int cutoff);

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }
  double trace_deficit = 0.0;

  // <a1 a2| rho |b1 b2>, with b2 = a2 + b1 - a1; zero elsewhere
  Complex at(int a1, int a2, int b1, int b2) const;
  Complex& ref(int a1, int a2, int b1);
  Complex get(int a1, int a2, int b1) const {
    return data_[index(a1, a2, b1)];
  }

  double trace() const;
  double mean_photons(int mode) const;
  void scale(double s);
  double min_eigenvalue() const;
  double hermiticity_error() const;
  Eigen::MatrixXcd dense() const;

 private:
  std::size_t index(int a1, int a2, int b1) const {
    const std::size_t d = static_cast<std::size_t>(dim());
    return (static_cast<std::size_t>(a1) * d + static_cast<std::size_t>(a2)) *
               d +
           static_cast<std::size_t>(b1);
  }
  int cutoff_;
  std::vector<Complex> data_;
};

// <k', N-k'| U(T) |k, N-k>, first label = system photons
Eigen::MatrixXd beam_splitter_block(double transmissivity, int total);

// <j| D(alpha) |k> for j, k <= cutoff
Eigen::MatrixXcd displacement_matrix(Complex alpha, int cutoff);

TruncatedState oracle_tmsv(double r, int cutoff);

TruncatedState oracle_channel(const TruncatedState& state, int mode,
                              const ChannelSpec& ch);

struct Heralded {
  TruncatedState state;
  double probability;
};

Heralded oracle_ng(const TruncatedState& state, const NgSpec& spec);

Complex oracle_cf(const TruncatedState& state, const std::array<double, 4>& x);

struct OracleInput {
  std::function<Complex(double, double)> cf;
  double c_tau;    // |chi(L)|^2 ~ exp(-c_tau tau^2 - c_sigma sigma^2)
  double c_sigma;

  static OracleInput from(const InputState& in);
};

struct QuadratureSettings {
  int initial_nodes = 24;
  int max_nodes = 160;
  double tolerance = 1e-8;
};

struct FidelityEstimate {
  double fidelity;
  int nodes;
  double delta;
};

FidelityEstimate oracle_fidelity(const OracleInput& input,
                                 const TruncatedState& resource,
                                 const QuadratureSettings& q = {});

struct CutoffPolicy {
  int start = 12;
  int cap = 64;
  double deficit_bound = 1e-8;
  double fidelity_delta = 1e-7;
};

struct OracleResult {
  double fidelity;
  double probability;
  int cutoff;
  double trace_deficit;
};

// Resource at one fixed cutoff, normalized; probability of the heralding
OracleResult oracle_pipeline_at(const FidelityQuery& q, int cutoff,
                                const QuadratureSettings& quad = {});

OracleResult oracle_pipeline(const FidelityQuery& q,
                             const CutoffPolicy& policy = {},
                             const QuadratureSettings& quad = {});

Heralded oracle_resource(const FidelityQuery& q, int cutoff);

}  // namespace cvtele::oracle

#endif  // CVTELE_FOCK_ORACLE_HPP
