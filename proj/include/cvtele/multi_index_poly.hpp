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

#ifndef CVTELE_MULTI_INDEX_POLY_HPP
#define CVTELE_MULTI_INDEX_POLY_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cvtele {

using Complex = std::complex<double>;

/// Sparse polynomial with complex coefficients in up to kMaxVars real
/// variables. Each monomial's exponent vector is packed into one 64-bit key,
/// eight bits per variable, so monomial multiplication is key addition.
///
/// Terms are kept sorted by key and no stored coefficient is exactly zero.
/// Tolerance-based pruning is explicit (see prune()).
class MultiIndexPoly {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxExponent = 255;

  using Key = std::uint64_t;
  struct Term {
    Key key;
    Complex coeff;
  };

  explicit MultiIndexPoly(int nvars = 0);

  static MultiIndexPoly constant(int nvars, Complex c);
  static MultiIndexPoly variable(int nvars, int index, Complex c = 1.0);
  static MultiIndexPoly monomial(int nvars, std::span<const int> exponents,
                                 Complex c);
  /// c0 + sum_j coeffs[j] * x_j
  static MultiIndexPoly affine(std::span<const Complex> coeffs, Complex c0);

  static Key make_key(std::span<const int> exponents);
  static int exponent(Key key, int var) {
    return static_cast<int>((key >> (8 * var)) & 0xffu);
  }
  static int key_degree(Key key);

  int nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Largest exponent of any single variable.
  int max_exponent() const;
  double max_abs_coeff() const;

  Complex coefficient(std::span<const int> exponents) const;
  Complex constant_term() const;

  Complex evaluate(std::span<const double> point) const;
  Complex evaluate(std::span<const Complex> point) const;

  MultiIndexPoly& operator+=(const MultiIndexPoly& other);
  MultiIndexPoly& operator-=(const MultiIndexPoly& other);
  MultiIndexPoly& operator*=(Complex scale);
  friend MultiIndexPoly operator+(MultiIndexPoly a, const MultiIndexPoly& b) {
    return a += b;
  }
  friend MultiIndexPoly operator-(MultiIndexPoly a, const MultiIndexPoly& b) {
    return a -= b;
  }
  friend MultiIndexPoly operator*(MultiIndexPoly a, Complex s) {
    return a *= s;
  }
  friend MultiIndexPoly operator*(Complex s, MultiIndexPoly a) {
    return a *= s;
  }
  friend MultiIndexPoly operator*(const MultiIndexPoly& a,
                                  const MultiIndexPoly& b);

  /// Adds scale * x^shift * other to this polynomial (same nvars).
  void add_shifted(const MultiIndexPoly& other, Key shift, Complex scale);

  /// Drops terms with |c| < rel_tol * max|c|.
  void prune(double rel_tol);

  /// Reindexes into a space of new_nvars variables: variable i becomes
  /// variable var_map[i].
  MultiIndexPoly embedded(int new_nvars, std::span<const int> var_map) const;

  /// Polynomial composition p'(z) = p(images[0](z), ..., images[n-1](z)).
  /// All images must share the same nvars, which becomes the result's.
  MultiIndexPoly compose(const std::vector<MultiIndexPoly>& images) const;

  /// p'(z) = p(M z) with M of shape nvars x new_nvars.
  MultiIndexPoly compose_linear(const Eigen::MatrixXd& m) const;

  /// Raises to a non-negative integer power.
  MultiIndexPoly pow(int exponent) const;

 private:
  friend class PolyAccumulator;
  int nvars_;
  std::vector<Term> terms_;
};

/// Open-addressing hash accumulator used to build polynomials term by term.
/// Coefficients for a key are summed in insertion order, so results are
/// deterministic.
class PolyAccumulator {
 public:
  explicit PolyAccumulator(int nvars, std::size_t expected_terms = 0);
  void add(MultiIndexPoly::Key key, Complex c);
  void add(const MultiIndexPoly& p, MultiIndexPoly::Key shift, Complex scale);
  MultiIndexPoly finish();

 private:
  static constexpr MultiIndexPoly::Key kEmpty = ~MultiIndexPoly::Key{0};
  void grow();
  std::size_t slot_of(MultiIndexPoly::Key key) const;

  int nvars_;
  std::size_t used_ = 0;
  std::vector<MultiIndexPoly::Key> keys_;
  std::vector<Complex> values_;
};

}  // namespace cvtele

#endif  // CVTELE_MULTI_INDEX_POLY_HPP
