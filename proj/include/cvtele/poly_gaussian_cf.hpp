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

#ifndef CVTELE_POLY_GAUSSIAN_CF_HPP
#define CVTELE_POLY_GAUSSIAN_CF_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvtele/multi_index_poly.hpp"

namespace cvtele {

/// Characteristic function of the form
///
///   chi(L) = weight * poly(L) * exp(-1/2 L^T A L + b^T L)
///
/// over the real phase-space vector L = (tau_1, sigma_1, ..., tau_n, sigma_n).
/// A is complex symmetric of order 2n, b a complex 2n-vector. Gaussian states
/// are stored with A = Omega V Omega^T and b = -i Omega d.
///
/// Values are immutable in practice: every operation below returns a new CF.
class PolyGaussianCF {
 public:
  PolyGaussianCF(int nmodes, Eigen::MatrixXcd a, Eigen::VectorXcd b,
                 MultiIndexPoly poly, Complex weight = 1.0);

  /// Zero-mode CF: just a scalar (the result of integrating everything out).
  static PolyGaussianCF scalar(Complex value);

  int nmodes() const { return nmodes_; }
  int nvars() const { return 2 * nmodes_; }
  const Eigen::MatrixXcd& a() const { return a_; }
  const Eigen::VectorXcd& b() const { return b_; }
  const MultiIndexPoly& poly() const { return poly_; }
  Complex weight() const { return weight_; }

 private:
  int nmodes_;
  Eigen::MatrixXcd a_;
  Eigen::VectorXcd b_;
  MultiIndexPoly poly_;
  Complex weight_;
};

/// Knobs for the algebraic engine.
struct AlgebraOptions {
  /// Terms below prune_rel_tol * (largest |coefficient|) are dropped after
  /// every algebraic step.
  double prune_rel_tol = 1e-14;
  /// Maximum total degree of a prefactor that integrate_out will accept.
  int degree_cap = 16;
  /// |trace| below this is treated as a zero-probability event.
  double zero_trace = 1e-30;
};

Complex evaluate(const PolyGaussianCF& cf, std::span<const double> point);

/// Multiplies the prefactor by q (same variable space).
PolyGaussianCF multiply_poly(const PolyGaussianCF& cf, const MultiIndexPoly& q,
                             const AlgebraOptions& opts = {});

/// Pointwise product of two CFs over the same modes.
PolyGaussianCF multiply(const PolyGaussianCF& lhs, const PolyGaussianCF& rhs,
                        const AlgebraOptions& opts = {});

/// CF of the tensor product; rhs modes are appended after lhs modes.
PolyGaussianCF tensor(const PolyGaussianCF& lhs, const PolyGaussianCF& rhs);

/// Returns chi'(z) = chi(M z). M has 2*nmodes rows and 2*keep_nmodes columns.
/// A square M must be invertible.
PolyGaussianCF substitute_linear(const PolyGaussianCF& cf,
                                 const Eigen::MatrixXd& m, int keep_nmodes,
                                 const AlgebraOptions& opts = {});

/// Square-matrix convenience overload (keep_nmodes = nmodes).
PolyGaussianCF substitute_linear(const PolyGaussianCF& cf,
                                 const Eigen::MatrixXd& m,
                                 const AlgebraOptions& opts = {});

/// prod_k (1/2pi) \int d^2 L_k chi over the listed modes. The remaining modes
/// keep their relative order. Throws IntegrabilityError when the real part
/// of the integrated block of A is not positive definite and DegreeCapError
/// when the prefactor degree exceeds opts.degree_cap.
PolyGaussianCF integrate_out(const PolyGaussianCF& cf, std::span<const int> modes,
                             const AlgebraOptions& opts = {});

/// Partial trace: restriction of the listed modes' variables to zero.
PolyGaussianCF trace_out(const PolyGaussianCF& cf, std::span<const int> modes,
                         const AlgebraOptions& opts = {});

struct Normalized {
  PolyGaussianCF cf;
  Complex trace;
};

/// Divides by chi(0). Throws ZeroProbabilityError when |chi(0)| < zero_trace.
Normalized normalize(const PolyGaussianCF& cf, const AlgebraOptions& opts = {});

/// chi(0) = Tr rho.
Complex trace(const PolyGaussianCF& cf);

/// Central moments E[W^gamma] of a zero-mean complex Gaussian with covariance
/// cov, for every multi-index gamma of total degree <= max_degree. Computed
/// by the Isserlis recursion E[W_i W^g] = sum_j cov_ij g_j E[W^(g-e_j)].
class GaussianMoments {
 public:
  GaussianMoments(Eigen::MatrixXcd cov, int max_degree);

  int dim() const { return static_cast<int>(cov_.rows()); }
  const Eigen::MatrixXcd& covariance() const { return cov_; }
  Complex moment(MultiIndexPoly::Key gamma) const;

 private:
  Eigen::MatrixXcd cov_;
  int max_degree_;
  std::vector<Complex> table_;
  std::vector<int> strides_;
  std::size_t index_of(MultiIndexPoly::Key gamma) const;
};

}  // namespace cvtele

#endif  // CVTELE_POLY_GAUSSIAN_CF_HPP
