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

#include "cvtele/multi_index_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cvtele/errors.hpp"

namespace cvtele {

namespace {

void check_nvars(int nvars) {
  if (nvars < 0 || nvars > MultiIndexPoly::kMaxVars) {
    throw DimensionError("polynomial variable count " + std::to_string(nvars) +
                         " outside [0, " +
                         std::to_string(MultiIndexPoly::kMaxVars) + "]");
  }
}

MultiIndexPoly::Key scale_key(MultiIndexPoly::Key key, int times) {
  // Byte-wise multiply; callers keep exponents below kMaxExponent.
  return key * static_cast<MultiIndexPoly::Key>(times);
}

}  // namespace

PolyAccumulator::PolyAccumulator(int nvars, std::size_t expected_terms)
    : nvars_(nvars) {
  std::size_t cap = 16;
  while (cap < 2 * expected_terms && cap < (std::size_t{1} << 20)) cap <<= 1;
  keys_.assign(cap, kEmpty);
  values_.assign(cap, Complex(0.0));
}

std::size_t PolyAccumulator::slot_of(MultiIndexPoly::Key key) const {
  // splitmix64 finalizer
  std::uint64_t h = key + 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  h ^= h >> 31;
  const std::size_t mask = keys_.size() - 1;
  std::size_t i = static_cast<std::size_t>(h) & mask;
  while (keys_[i] != kEmpty && keys_[i] != key) i = (i + 1) & mask;
  return i;
}

void PolyAccumulator::grow() {
  std::vector<MultiIndexPoly::Key> old_keys = std::move(keys_);
  std::vector<Complex> old_values = std::move(values_);
  keys_.assign(old_keys.size() * 2, kEmpty);
  values_.assign(old_keys.size() * 2, Complex(0.0));
  for (std::size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] == kEmpty) continue;
    const std::size_t s = slot_of(old_keys[i]);
    keys_[s] = old_keys[i];
    values_[s] = old_values[i];
  }
}

void PolyAccumulator::add(MultiIndexPoly::Key key, Complex c) {
  std::size_t s = slot_of(key);
  if (keys_[s] == kEmpty) {
    if (2 * (used_ + 1) > keys_.size()) {
      grow();
      s = slot_of(key);
    }
    keys_[s] = key;
    ++used_;
  }
  values_[s] += c;
}

void PolyAccumulator::add(const MultiIndexPoly& p, MultiIndexPoly::Key shift,
                          Complex scale) {
  if (scale == Complex(0.0)) return;
  for (const auto& t : p.terms()) add(t.key + shift, t.coeff * scale);
}

MultiIndexPoly PolyAccumulator::finish() {
  std::vector<MultiIndexPoly::Term> terms;
  terms.reserve(used_);
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (keys_[i] != kEmpty && values_[i] != Complex(0.0)) {
      terms.push_back({keys_[i], values_[i]});
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  MultiIndexPoly p(nvars_);
  p.terms_ = std::move(terms);
  std::fill(keys_.begin(), keys_.end(), kEmpty);
  std::fill(values_.begin(), values_.end(), Complex(0.0));
  used_ = 0;
  return p;
}

MultiIndexPoly::MultiIndexPoly(int nvars) : nvars_(nvars) { check_nvars(nvars); }

MultiIndexPoly MultiIndexPoly::constant(int nvars, Complex c) {
  MultiIndexPoly p(nvars);
  if (c != Complex(0.0)) p.terms_.push_back({0, c});
  return p;
}

MultiIndexPoly MultiIndexPoly::variable(int nvars, int index, Complex c) {
  if (index < 0 || index >= nvars) {
    throw DimensionError("variable index " + std::to_string(index) +
                         " out of range for " + std::to_string(nvars) +
                         " variables");
  }
  MultiIndexPoly p(nvars);
  if (c != Complex(0.0)) p.terms_.push_back({Key{1} << (8 * index), c});
  return p;
}

MultiIndexPoly MultiIndexPoly::monomial(int nvars,
                                        std::span<const int> exponents,
                                        Complex c) {
  if (static_cast<int>(exponents.size()) != nvars) {
    throw DimensionError("monomial exponent vector has length " +
                         std::to_string(exponents.size()) + ", expected " +
                         std::to_string(nvars));
  }
  MultiIndexPoly p(nvars);
  if (c != Complex(0.0)) p.terms_.push_back({make_key(exponents), c});
  return p;
}

MultiIndexPoly MultiIndexPoly::affine(std::span<const Complex> coeffs,
                                      Complex c0) {
  const int n = static_cast<int>(coeffs.size());
  PolyAccumulator acc(n, coeffs.size() + 1);
  acc.add(0, c0);
  for (int j = 0; j < n; ++j) acc.add(Key{1} << (8 * j), coeffs[j]);
  return acc.finish();
}

MultiIndexPoly::Key MultiIndexPoly::make_key(std::span<const int> exponents) {
  if (exponents.size() > static_cast<std::size_t>(kMaxVars)) {
    throw DimensionError("too many variables in exponent vector");
  }
  Key key = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > kMaxExponent) {
      throw DegreeCapError("exponent " + std::to_string(exponents[i]) +
                           " outside [0, 255]");
    }
    key |= static_cast<Key>(exponents[i]) << (8 * i);
  }
  return key;
}

int MultiIndexPoly::key_degree(Key key) {
  int d = 0;
  for (; key != 0; key >>= 8) d += static_cast<int>(key & 0xffu);
  return d;
}

int MultiIndexPoly::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, key_degree(t.key));
  return d;
}

int MultiIndexPoly::max_exponent() const {
  int e = 0;
  for (const auto& t : terms_) {
    for (int i = 0; i < nvars_; ++i) e = std::max(e, exponent(t.key, i));
  }
  return e;
}

double MultiIndexPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

Complex MultiIndexPoly::coefficient(std::span<const int> exponents) const {
  const Key key = make_key(exponents);
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), key,
      [](const Term& t, Key k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coeff : Complex(0.0);
}

Complex MultiIndexPoly::constant_term() const {
  return (!terms_.empty() && terms_.front().key == 0) ? terms_.front().coeff
                                                      : Complex(0.0);
}

namespace {

template <typename Scalar>
Complex evaluate_impl(const MultiIndexPoly& p, std::span<const Scalar> point) {
  const int n = p.nvars();
  if (static_cast<int>(point.size()) != n) {
    throw DimensionError("evaluation point has length " +
                         std::to_string(point.size()) + ", polynomial has " +
                         std::to_string(n) + " variables");
  }
  if (p.is_zero()) return 0.0;
  const int emax = p.max_exponent();
  std::vector<Complex> powers(static_cast<std::size_t>(n) * (emax + 1));
  for (int i = 0; i < n; ++i) {
    Complex v = 1.0;
    for (int e = 0; e <= emax; ++e) {
      powers[i * (emax + 1) + e] = v;
      v *= Complex(point[i]);
    }
  }
  Complex sum = 0.0;
  for (const auto& t : p.terms()) {
    Complex m = t.coeff;
    for (int i = 0; i < n; ++i) {
      const int e = MultiIndexPoly::exponent(t.key, i);
      if (e != 0) m *= powers[i * (emax + 1) + e];
    }
    sum += m;
  }
  return sum;
}

}  // namespace

Complex MultiIndexPoly::evaluate(std::span<const double> point) const {
  return evaluate_impl(*this, point);
}

Complex MultiIndexPoly::evaluate(std::span<const Complex> point) const {
  return evaluate_impl(*this, point);
}

MultiIndexPoly& MultiIndexPoly::operator+=(const MultiIndexPoly& other) {
  if (other.nvars_ != nvars_) {
    throw DimensionError("adding polynomials over different variable counts");
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < other.terms_.size()) {
    if (j == other.terms_.size() ||
        (i < terms_.size() && terms_[i].key < other.terms_[j].key)) {
      merged.push_back(terms_[i++]);
    } else if (i == terms_.size() || other.terms_[j].key < terms_[i].key) {
      merged.push_back(other.terms_[j++]);
    } else {
      const Complex s = terms_[i].coeff + other.terms_[j].coeff;
      if (s != Complex(0.0)) merged.push_back({terms_[i].key, s});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MultiIndexPoly& MultiIndexPoly::operator-=(const MultiIndexPoly& other) {
  return *this += other * Complex(-1.0);
}

MultiIndexPoly& MultiIndexPoly::operator*=(Complex scale) {
  if (scale == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= scale;
  std::erase_if(terms_, [](const Term& t) { return t.coeff == Complex(0.0); });
  return *this;
}

namespace {

// out = acc + scale * x^shift * src; both inputs sorted by key
void merge_shifted(const std::vector<MultiIndexPoly::Term>& acc,
                   const std::vector<MultiIndexPoly::Term>& src,
                   MultiIndexPoly::Key shift, Complex scale,
                   std::vector<MultiIndexPoly::Term>& out) {
  out.clear();
  out.reserve(acc.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() && j < src.size()) {
    const MultiIndexPoly::Key kj = src[j].key + shift;
    if (acc[i].key < kj) {
      out.push_back(acc[i++]);
    } else if (kj < acc[i].key) {
      out.push_back({kj, scale * src[j++].coeff});
    } else {
      const Complex v = acc[i++].coeff + scale * src[j++].coeff;
      if (v != Complex(0.0)) out.push_back({kj, v});
    }
  }
  for (; i < acc.size(); ++i) out.push_back(acc[i]);
  for (; j < src.size(); ++j) out.push_back({src[j].key + shift, scale * src[j].coeff});
}

constexpr std::size_t kMergeFactorLimit = 24;

}  // namespace

MultiIndexPoly operator*(const MultiIndexPoly& a, const MultiIndexPoly& b) {
  if (a.nvars() != b.nvars()) {
    throw DimensionError(
        "multiplying polynomials over different variable counts");
  }
  if (a.is_zero() || b.is_zero()) return MultiIndexPoly(a.nvars());
  if (a.max_exponent() + b.max_exponent() > MultiIndexPoly::kMaxExponent) {
    throw DegreeCapError("product exponent exceeds 255");
  }
  const MultiIndexPoly& small = a.size() <= b.size() ? a : b;
  const MultiIndexPoly& big = a.size() <= b.size() ? b : a;
  if (small.size() <= kMergeFactorLimit) {
    std::vector<MultiIndexPoly::Term> acc, tmp;
    for (const auto& t : small.terms()) {
      merge_shifted(acc, big.terms(), t.key, t.coeff, tmp);
      std::swap(acc, tmp);
    }
    MultiIndexPoly out(a.nvars());
    out.terms_ = std::move(acc);
    return out;
  }
  PolyAccumulator acc(a.nvars(), a.size() + b.size());
  for (const auto& ta : a.terms()) acc.add(b, ta.key, ta.coeff);
  return acc.finish();
}

void MultiIndexPoly::add_shifted(const MultiIndexPoly& other, Key shift,
                                 Complex scale) {
  if (other.nvars_ != nvars_) {
    throw DimensionError("adding polynomials over different variable counts");
  }
  if (scale == Complex(0.0)) return;
  std::vector<Term> out;
  merge_shifted(terms_, other.terms_, shift, scale, out);
  terms_ = std::move(out);
}

void MultiIndexPoly::prune(double rel_tol) {
  const double cut = rel_tol * max_abs_coeff();
  std::erase_if(terms_, [cut](const Term& t) { return std::abs(t.coeff) < cut; });
}

MultiIndexPoly MultiIndexPoly::embedded(int new_nvars,
                                        std::span<const int> var_map) const {
  if (static_cast<int>(var_map.size()) != nvars_) {
    throw DimensionError("embedding map length does not match variable count");
  }
  for (int v : var_map) {
    if (v < 0 || v >= new_nvars) {
      throw DimensionError("embedding target variable out of range");
    }
  }
  PolyAccumulator acc(new_nvars, terms_.size());
  for (const auto& t : terms_) {
    Key key = 0;
    for (int i = 0; i < nvars_; ++i) {
      key += static_cast<Key>(exponent(t.key, i)) << (8 * var_map[i]);
    }
    acc.add(key, t.coeff);
  }
  return acc.finish();
}

MultiIndexPoly MultiIndexPoly::pow(int e) const {
  if (e < 0) throw DomainError("negative polynomial power");
  MultiIndexPoly result = constant(nvars_, 1.0);
  MultiIndexPoly base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

MultiIndexPoly MultiIndexPoly::compose(
    const std::vector<MultiIndexPoly>& images) const {
  if (static_cast<int>(images.size()) != nvars_) {
    throw DimensionError("composition needs one image per variable");
  }
  const int out_vars = images.empty() ? 0 : images.front().nvars();
  for (const auto& im : images) {
    if (im.nvars() != out_vars) {
      throw DimensionError("composition images over different variable counts");
    }
  }
  if (nvars_ == 0) {
    MultiIndexPoly p(out_vars);
    p.terms_ = terms_;
    return p;
  }

  // Variables whose image is a single monomial are mapped by key arithmetic;
  // the rest are expanded through memoized powers.
  std::vector<bool> is_mono(nvars_);
  std::vector<Key> mono_key(nvars_, 0);
  std::vector<Complex> mono_coeff(nvars_, 0.0);
  Key general_mask = 0;
  for (int i = 0; i < nvars_; ++i) {
    is_mono[i] = images[i].size() <= 1;
    if (is_mono[i] && images[i].size() == 1) {
      mono_key[i] = images[i].terms_[0].key;
      mono_coeff[i] = images[i].terms_[0].coeff;
    }
    if (!is_mono[i]) general_mask |= Key{0xff} << (8 * i);
  }

  std::vector<std::vector<MultiIndexPoly>> powers(nvars_);
  auto power_of = [&](int var, int e) -> const MultiIndexPoly& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(constant(out_vars, 1.0));
    while (static_cast<int>(cache.size()) <= e) {
      cache.push_back(cache.back() * images[var]);
    }
    return cache[e];
  };

  std::map<Key, MultiIndexPoly> expansions;
  auto expansion_of = [&](Key general_key) -> const MultiIndexPoly& {
    auto it = expansions.find(general_key);
    if (it != expansions.end()) return it->second;
    MultiIndexPoly e = constant(out_vars, 1.0);
    for (int i = 0; i < nvars_; ++i) {
      const int k = exponent(general_key, i);
      if (k > 0) e = e * power_of(i, k);
    }
    return expansions.emplace(general_key, std::move(e)).first->second;
  };

  PolyAccumulator acc(out_vars, terms_.size() * 4);
  for (const auto& t : terms_) {
    Complex c = t.coeff;
    Key shift = 0;
    bool vanished = false;
    for (int i = 0; i < nvars_ && !vanished; ++i) {
      const int k = exponent(t.key, i);
      if (k == 0 || !is_mono[i]) continue;
      if (mono_coeff[i] == Complex(0.0)) {
        vanished = true;
        break;
      }
      c *= std::pow(mono_coeff[i], k);
      shift += scale_key(mono_key[i], k);
    }
    if (vanished) continue;
    const Key gkey = t.key & general_mask;
    if (gkey == 0) {
      acc.add(shift, c);
    } else {
      acc.add(expansion_of(gkey), shift, c);
    }
  }
  return acc.finish();
}

MultiIndexPoly MultiIndexPoly::compose_linear(const Eigen::MatrixXd& m) const {
  if (m.rows() != nvars_) {
    throw DimensionError("linear substitution matrix has " +
                         std::to_string(m.rows()) + " rows, expected " +
                         std::to_string(nvars_));
  }
  const int out_vars = static_cast<int>(m.cols());
  std::vector<MultiIndexPoly> images;
  images.reserve(nvars_);
  std::vector<Complex> row(out_vars);
  for (int i = 0; i < nvars_; ++i) {
    for (int j = 0; j < out_vars; ++j) row[j] = m(i, j);
    images.push_back(affine(row, 0.0));
  }
  return compose(images);
}

}  // namespace cvtele
