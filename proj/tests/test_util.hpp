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


#ifndef CVTELE_TESTS_TEST_UTIL_HPP
#define CVTELE_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvtele/poly_gaussian_cf.hpp"

namespace cvtele::testing {

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

// composite Gauss-Legendre on [-half, half]^2
inline Complex integrate_2d(const std::function<Complex(double, double)>& f,
                            double half, int panels = 12, int order = 12) {
  auto [x, w] = gauss_legendre(order);
  std::vector<double> nodes, weights;
  const double h = 2.0 * half / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = -half + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      nodes.push_back(c + 0.5 * h * x(i));
      weights.push_back(0.5 * h * w(i));
    }
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += weights[i] * weights[k] * f(nodes[i], nodes[k]);
  return acc;
}

inline MultiIndexPoly random_poly(std::mt19937_64& rng, int nvars, int degree,
                                  int terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, nvars - 1);
  std::uniform_int_distribution<int> deg(0, degree);
  MultiIndexPoly p = MultiIndexPoly::constant(nvars, Complex(1.0 + u(rng), u(rng)));
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(var(rng))];
    p += MultiIndexPoly::monomial(nvars, e, Complex(u(rng), u(rng)));
  }
  return p;
}

// Re A positive definite (smallest eigenvalue >= floor), small Im A
inline PolyGaussianCF random_cf(std::mt19937_64& rng, int nmodes, int degree,
                                int terms, double floor = 0.5,
                                double imag = 0.2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 2 * nmodes;
  Eigen::MatrixXd r(n, n), s(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      r(i, k) = 0.5 * u(rng);
      s(i, k) = imag * u(rng);
    }
  Eigen::MatrixXd re = r * r.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd im = 0.5 * (s + s.transpose());
  Eigen::MatrixXcd a(n, n);
  a.real() = re;
  a.imag() = im;
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b(i) = Complex(0.3 * u(rng), 0.3 * u(rng));
  return PolyGaussianCF(nmodes, a, b, random_poly(rng, n, degree, terms),
                        Complex(0.5 + 0.5 * u(rng) + 1.0, 0.2 * u(rng)));
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n,
                                        double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

inline Complex eval_at(const PolyGaussianCF& cf, const std::vector<double>& x) {
  return evaluate(cf, x);
}

inline double hermiticity_gap(const PolyGaussianCF& cf, std::mt19937_64& rng,
                              int samples = 100, double scale = 2.0) {
  double gap = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto x = random_point(rng, cf.nvars(), scale);
    std::vector<double> mx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mx[i] = -x[i];
    gap = std::max(gap, std::abs(evaluate(cf, mx) - std::conj(evaluate(cf, x))));
  }
  return gap;
}

}  // namespace cvtele::testing

#endif  // CVTELE_TESTS_TEST_UTIL_HPP
