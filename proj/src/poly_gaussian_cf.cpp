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

#include "cvtele/poly_gaussian_cf.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "cvtele/errors.hpp"

namespace cvtele {

namespace {

using Key = MultiIndexPoly::Key;

Eigen::MatrixXcd symmetrized(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.transpose());
}

void check_point(const PolyGaussianCF& cf, std::size_t len) {
  if (static_cast<int>(len) != cf.nvars()) {
    throw DimensionError("point has length " + std::to_string(len) +
                         ", CF has " + std::to_string(cf.nvars()) +
                         " variables");
  }
}

std::vector<int> vars_of_modes(std::span<const int> modes, int nmodes) {
  std::vector<int> vars;
  std::vector<bool> seen(nmodes, false);
  for (int m : modes) {
    if (m < 0 || m >= nmodes) {
      throw DimensionError("mode index " + std::to_string(m) +
                           " out of range for " + std::to_string(nmodes) +
                           " modes");
    }
    if (seen[m]) throw DimensionError("repeated mode index " + std::to_string(m));
    seen[m] = true;
  }
  for (int m = 0; m < nmodes; ++m) {
    if (seen[m]) {
      vars.push_back(2 * m);
      vars.push_back(2 * m + 1);
    }
  }
  return vars;
}

std::vector<int> complement_vars(const std::vector<int>& vars, int nvars) {
  std::vector<bool> in(nvars, false);
  for (int v : vars) in[v] = true;
  std::vector<int> out;
  for (int v = 0; v < nvars; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

Eigen::MatrixXcd sub(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  Eigen::MatrixXcd s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
  }
  return s;
}

Eigen::VectorXcd sub(const Eigen::VectorXcd& v, const std::vector<int>& idx) {
  Eigen::VectorXcd s(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) s(i) = v(idx[i]);
  return s;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Square root of det(B) continued from the real positive-definite case:
// product of principal square roots of the eigenvalues, all of which lie in
// the open right half-plane when Re B > 0.
Complex sqrt_det(const Eigen::MatrixXcd& b) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b, false);
  Complex r = 1.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    r *= std::sqrt(es.eigenvalues()(i));
  }
  return r;
}

}  // namespace

PolyGaussianCF::PolyGaussianCF(int nmodes, Eigen::MatrixXcd a,
                               Eigen::VectorXcd b, MultiIndexPoly poly,
                               Complex weight)
    : nmodes_(nmodes),
      a_(std::move(a)),
      b_(std::move(b)),
      poly_(std::move(poly)),
      weight_(weight) {
  const int n = 2 * nmodes;
  if (nmodes < 0 || a_.rows() != n || a_.cols() != n || b_.size() != n ||
      poly_.nvars() != n) {
    throw DimensionError("inconsistent CF dimensions for " +
                         std::to_string(nmodes) + " modes");
  }
  if (n == 0) return;
  const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
  if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DimensionError("quadratic form A is not symmetric");
  }
}

PolyGaussianCF PolyGaussianCF::scalar(Complex value) {
  return PolyGaussianCF(0, Eigen::MatrixXcd(0, 0), Eigen::VectorXcd(0),
                        MultiIndexPoly::constant(0, 1.0), value);
}

Complex evaluate(const PolyGaussianCF& cf, std::span<const double> point) {
  check_point(cf, point.size());
  const int n = cf.nvars();
  Complex quad = 0.0, lin = 0.0;
  for (int i = 0; i < n; ++i) {
    lin += cf.b()(i) * point[i];
    for (int j = 0; j < n; ++j) quad += point[i] * cf.a()(i, j) * point[j];
  }
  return cf.weight() * cf.poly().evaluate(point) * std::exp(-0.5 * quad + lin);
}

Complex trace(const PolyGaussianCF& cf) {
  return cf.weight() * cf.poly().constant_term();
}

PolyGaussianCF multiply_poly(const PolyGaussianCF& cf, const MultiIndexPoly& q,
                             const AlgebraOptions& opts) {
  if (q.nvars() != cf.nvars()) {
    throw DimensionError("multiplier polynomial has " +
                         std::to_string(q.nvars()) + " variables, CF has " +
                         std::to_string(cf.nvars()));
  }
  MultiIndexPoly p = cf.poly() * q;
  p.prune(opts.prune_rel_tol);
  return PolyGaussianCF(cf.nmodes(), cf.a(), cf.b(), std::move(p), cf.weight());
}

PolyGaussianCF multiply(const PolyGaussianCF& lhs, const PolyGaussianCF& rhs,
                        const AlgebraOptions& opts) {
  if (lhs.nmodes() != rhs.nmodes()) {
    throw DimensionError("multiplying CFs over different mode counts");
  }
  MultiIndexPoly p = lhs.poly() * rhs.poly();
  p.prune(opts.prune_rel_tol);
  return PolyGaussianCF(lhs.nmodes(), symmetrized(lhs.a() + rhs.a()),
                        lhs.b() + rhs.b(), std::move(p),
                        lhs.weight() * rhs.weight());
}

PolyGaussianCF tensor(const PolyGaussianCF& lhs, const PolyGaussianCF& rhs) {
  const int nl = lhs.nvars();
  const int nr = rhs.nvars();
  const int n = nl + nr;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  a.topLeftCorner(nl, nl) = lhs.a();
  a.bottomRightCorner(nr, nr) = rhs.a();
  Eigen::VectorXcd b(n);
  b << lhs.b(), rhs.b();
  std::vector<int> lmap(nl), rmap(nr);
  for (int i = 0; i < nl; ++i) lmap[i] = i;
  for (int i = 0; i < nr; ++i) rmap[i] = nl + i;
  MultiIndexPoly p = lhs.poly().embedded(n, lmap) * rhs.poly().embedded(n, rmap);
  return PolyGaussianCF(lhs.nmodes() + rhs.nmodes(), std::move(a), std::move(b),
                        std::move(p), lhs.weight() * rhs.weight());
}

PolyGaussianCF substitute_linear(const PolyGaussianCF& cf,
                                 const Eigen::MatrixXd& m, int keep_nmodes,
                                 const AlgebraOptions& opts) {
  if (m.rows() != cf.nvars() || m.cols() != 2 * keep_nmodes) {
    throw DimensionError("substitution matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ", expected " +
                         std::to_string(cf.nvars()) + "x" +
                         std::to_string(2 * keep_nmodes));
  }
  if (m.rows() == m.cols() && m.rows() > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) {
      throw DomainError("substitution matrix is singular");
    }
  }
  const Eigen::MatrixXcd mc = m.cast<Complex>();
  Eigen::MatrixXcd a = symmetrized(mc.transpose() * cf.a() * mc);
  Eigen::VectorXcd b = mc.transpose() * cf.b();
  MultiIndexPoly p = cf.poly().compose_linear(m);
  p.prune(opts.prune_rel_tol);
  return PolyGaussianCF(keep_nmodes, std::move(a), std::move(b), std::move(p),
                        cf.weight());
}

PolyGaussianCF substitute_linear(const PolyGaussianCF& cf,
                                 const Eigen::MatrixXd& m,
                                 const AlgebraOptions& opts) {
  return substitute_linear(cf, m, cf.nmodes(), opts);
}

PolyGaussianCF trace_out(const PolyGaussianCF& cf, std::span<const int> modes,
                         const AlgebraOptions& opts) {
  const auto yvars = vars_of_modes(modes, cf.nmodes());
  const auto kvars = complement_vars(yvars, cf.nvars());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(cf.nvars(), kvars.size());
  for (std::size_t j = 0; j < kvars.size(); ++j) m(kvars[j], j) = 1.0;
  return substitute_linear(cf, m, static_cast<int>(kvars.size() / 2), opts);
}

Normalized normalize(const PolyGaussianCF& cf, const AlgebraOptions& opts) {
  const Complex tr = trace(cf);
  if (!(std::abs(tr) >= opts.zero_trace)) {
    throw ZeroProbabilityError("trace " + std::to_string(std::abs(tr)) +
                               " below zero-probability threshold");
  }
  return {PolyGaussianCF(cf.nmodes(), cf.a(), cf.b(), cf.poly(),
                         cf.weight() / tr),
          tr};
}

GaussianMoments::GaussianMoments(Eigen::MatrixXcd cov, int max_degree)
    : cov_(std::move(cov)), max_degree_(max_degree) {
  const int d = dim();
  if (d > MultiIndexPoly::kMaxVars) {
    throw DimensionError("too many Gaussian variables for moment table");
  }
  strides_.resize(d);
  std::size_t size = 1;
  for (int i = 0; i < d; ++i) {
    strides_[i] = static_cast<int>(size);
    size *= static_cast<std::size_t>(max_degree_ + 1);
  }
  table_.assign(size, Complex(0.0));
  table_[0] = 1.0;
  std::vector<int> g(d, 0);
  for (std::size_t idx = 1; idx < size; ++idx) {
    // decode
    std::size_t rem = idx;
    int total = 0;
    for (int i = 0; i < d; ++i) {
      g[i] = static_cast<int>(rem % (max_degree_ + 1));
      rem /= (max_degree_ + 1);
      total += g[i];
    }
    if (total > max_degree_ || total % 2 == 1) continue;
    int first = 0;
    while (g[first] == 0) ++first;
    // E[W_first * W^h] with h = g - e_first
    const std::size_t h = idx - strides_[first];
    Complex sum = 0.0;
    for (int j = 0; j < d; ++j) {
      const int hj = g[j] - (j == first ? 1 : 0);
      if (hj == 0) continue;
      sum += cov_(first, j) * static_cast<double>(hj) *
             table_[h - strides_[j]];
    }
    table_[idx] = sum;
  }
}

std::size_t GaussianMoments::index_of(Key gamma) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim(); ++i) {
    idx += static_cast<std::size_t>(MultiIndexPoly::exponent(gamma, i)) *
           strides_[i];
  }
  return idx;
}

Complex GaussianMoments::moment(Key gamma) const {
  const int deg = MultiIndexPoly::key_degree(gamma);
  if (deg > max_degree_) {
    throw DegreeCapError("moment of degree " + std::to_string(deg) +
                         " beyond table degree " + std::to_string(max_degree_));
  }
  if (deg % 2 == 1) return 0.0;
  return table_[index_of(gamma)];
}

PolyGaussianCF integrate_out(const PolyGaussianCF& cf, std::span<const int> modes,
                             const AlgebraOptions& opts) {
  const auto yvars = vars_of_modes(modes, cf.nmodes());
  const auto kvars = complement_vars(yvars, cf.nvars());
  const int ny = static_cast<int>(yvars.size());
  const int nk = static_cast<int>(kvars.size());
  if (ny == 0) return cf;

  const int deg = cf.poly().degree();
  if (deg > opts.degree_cap) {
    throw DegreeCapError("prefactor degree " + std::to_string(deg) +
                         " exceeds cap " + std::to_string(opts.degree_cap));
  }

  const Eigen::MatrixXcd byy = sub(cf.a(), yvars, yvars);
  Eigen::LLT<Eigen::MatrixXd> llt(byy.real());
  if (llt.info() != Eigen::Success) {
    throw IntegrabilityError(
        "real part of the integrated quadratic block is not positive definite");
  }
  const Eigen::MatrixXcd binv = byy.partialPivLu().inverse();
  const Eigen::MatrixXcd ayk = sub(cf.a(), yvars, kvars);
  const Eigen::VectorXcd by = sub(cf.b(), yvars);

  // Shifted mean mu(z) = c + L z of the integrated variables.
  const Eigen::VectorXcd mu_c = binv * by;
  const Eigen::MatrixXcd mu_l = -binv * ayk;

  // Split each term into its integrated exponent beta and kept exponent.
  std::map<Key, PolyAccumulator> by_beta;
  int max_beta_degree = 0;
  for (const auto& t : cf.poly().terms()) {
    Key beta = 0, zkey = 0;
    for (int i = 0; i < ny; ++i) {
      beta |= static_cast<Key>(MultiIndexPoly::exponent(t.key, yvars[i]))
              << (8 * i);
    }
    for (int i = 0; i < nk; ++i) {
      zkey |= static_cast<Key>(MultiIndexPoly::exponent(t.key, kvars[i]))
              << (8 * i);
    }
    max_beta_degree = std::max(max_beta_degree, MultiIndexPoly::key_degree(beta));
    auto it = by_beta.try_emplace(beta, nk).first;
    it->second.add(zkey, t.coeff);
  }

  const GaussianMoments moments(binv, max_beta_degree);

  // r_delta = sum_{beta >= delta} C(beta, delta) m_{beta - delta} p_beta
  std::map<Key, MultiIndexPoly> by_delta;
  std::vector<int> beta_e(ny), gamma_e(ny);
  for (auto& [beta, acc] : by_beta) {
    const MultiIndexPoly p_beta = acc.finish();
    for (int i = 0; i < ny; ++i) beta_e[i] = MultiIndexPoly::exponent(beta, i);
    std::fill(gamma_e.begin(), gamma_e.end(), 0);
    while (true) {
      Key gamma = MultiIndexPoly::make_key(gamma_e);
      const Complex m = moments.moment(gamma);
      if (m != Complex(0.0)) {
        double c = 1.0;
        for (int i = 0; i < ny; ++i) c *= binomial(beta_e[i], gamma_e[i]);
        by_delta.try_emplace(beta - gamma, nk).first->second.add_shifted(
            p_beta, 0, c * m);
      }
      int i = 0;
      for (; i < ny; ++i) {
        if (++gamma_e[i] <= beta_e[i]) break;
        gamma_e[i] = 0;
      }
      if (i == ny) break;
    }
  }

  std::vector<MultiIndexPoly> mu;
  mu.reserve(ny);
  std::vector<Complex> row(nk);
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nk; ++j) row[j] = mu_l(i, j);
    mu.push_back(MultiIndexPoly::affine(row, mu_c(i)));
  }

  // sum_delta r_delta(z) mu(z)^delta by nested Horner schemes over the
  // integrated variables, so every step multiplies by an affine form.
  std::vector<std::pair<Key, MultiIndexPoly>> rs;
  rs.reserve(by_delta.size());
  for (auto& [delta, r] : by_delta) {
    if (!r.is_zero()) rs.emplace_back(delta, std::move(r));
  }
  std::function<MultiIndexPoly(const std::vector<std::size_t>&, int)> horner =
      [&](const std::vector<std::size_t>& idx, int var) -> MultiIndexPoly {
    if (var == ny) return rs[idx.front()].second;  // one delta per leaf
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t k : idx) {
      groups[MultiIndexPoly::exponent(rs[k].first, var)].push_back(k);
    }
    MultiIndexPoly result(nk);
    for (int e = groups.rbegin()->first; e >= 0; --e) {
      if (!result.is_zero()) result = result * mu[var];
      auto it = groups.find(e);
      if (it != groups.end()) result += horner(it->second, var + 1);
    }
    return result;
  };
  std::vector<std::size_t> all(rs.size());
  for (std::size_t k = 0; k < rs.size(); ++k) all[k] = k;
  MultiIndexPoly poly = rs.empty() ? MultiIndexPoly(nk) : horner(all, 0);
  poly.prune(opts.prune_rel_tol);

  const Eigen::MatrixXcd akk = sub(cf.a(), kvars, kvars);
  const Eigen::VectorXcd bk = sub(cf.b(), kvars);
  Eigen::MatrixXcd a_new = symmetrized(akk - ayk.transpose() * binv * ayk);
  Eigen::VectorXcd b_new = bk - ayk.transpose() * binv * by;
  // (2pi)^{ny/2} from the Gaussian integral cancels the (1/2pi) per mode.
  const Complex w = cf.weight() *
                    std::exp(0.5 * by.cwiseProduct(binv * by).sum()) /
                    sqrt_det(byy);
  return PolyGaussianCF(nk / 2, std::move(a_new), std::move(b_new),
                        std::move(poly), w);
}

}  // namespace cvtele
