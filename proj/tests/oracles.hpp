#pragma once

// Independent reference computations used only by the tests.

#include <cstdint>
#include <random>
#include <vector>

#include "agcalc/multi_index.hpp"
#include "agcalc/poly.hpp"
#include "agcalc/weyl.hpp"

namespace oracle {

using agcalc::Integer;
using agcalc::Monomial;
using agcalc::Rational;
using agcalc::SparsePoly;
using agcalc::VarSet;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int range(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Rational coeff() {
    Rational r(range(1, 5) * (range(0, 1) ? 1 : -1), range(1, 3));
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 gen_;
};

// Random polynomial over `vars`: `terms` terms, total degree <= max_deg (all
// variables count), with z-degree >= min_z.
inline SparsePoly random_poly(Rng& rng, VarSet vars, int max_deg, int terms, int min_z = 0) {
  std::vector<SparsePoly::Term> out;
  for (int k = 0; k < terms; ++k) {
    Monomial m;
    const int deg = rng.range(min_z, max_deg);
    for (int e = 0; e < deg; ++e) m.add(rng.range(0, vars.size() - 1), 1);
    int zdeg = 0;
    for (int i = 0; i < vars.n(); ++i) zdeg += m[vars.z(i)];
    for (int e = zdeg; e < min_z; ++e) m.add(vars.z(rng.range(0, vars.n() - 1)), 1);
    out.emplace_back(m, rng.coeff());
  }
  return SparsePoly::from_terms(vars, std::move(out));
}

// Random operator with |alpha| <= max_alpha and coefficient degree <= max_coeff.
inline agcalc::DiffOp random_op(Rng& rng, int n, int max_alpha, int max_coeff, int terms) {
  agcalc::DiffOp op(n);
  const VarSet z = VarSet::of_z(n);
  for (int k = 0; k < terms; ++k) {
    Monomial alpha;
    const int a = rng.range(0, max_alpha);
    for (int e = 0; e < a; ++e) alpha.add(rng.range(0, n - 1), 1);
    op.add_term(alpha, random_poly(rng, z, max_coeff, rng.range(1, 2)));
  }
  return op;
}

inline Integer binom(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer catalan(unsigned k) { return binom(2 * k, k) / (k + 1); }

// Coefficients of JG for H = z^2, n = 1: C(2k, k).
inline Integer central_binomial(unsigned k) { return binom(2 * k, k); }

// Closed form for Phi on a monomial xi^a z^b: the sum over gamma <= min(a, b)
// of (1/gamma!) a!/(a-gamma)! b!/(b-gamma)! xi^(a-gamma) z^(b-gamma).
inline SparsePoly phi_monomial(const agcalc::MultiIndex& a, const agcalc::MultiIndex& b) {
  const int n = static_cast<int>(a.size());
  const VarSet v = VarSet::of_xi_z(n);
  agcalc::MultiIndex cap(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) cap[i] = std::min(a[i], b[i]);
  std::vector<SparsePoly::Term> terms;
  for (const auto& g : agcalc::sub_indices(cap)) {
    Rational c(agcalc::falling_factorial(a, g) * agcalc::falling_factorial(b, g));
    c /= Rational(agcalc::factorial(g));
    Monomial m;
    for (int i = 0; i < n; ++i) {
      m.set(v.xi(i), a[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)]);
      m.set(v.z(i), b[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)]);
    }
    terms.emplace_back(m, c);
  }
  return SparsePoly::from_terms(v, std::move(terms));
}

// Dense univariate series helpers, index = degree, length D + 1.
using Dense = std::vector<Rational>;

inline Dense dense_mul(const Dense& a, const Dense& b) {
  Dense c(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Series reversion of F = z - H by Lagrange inversion:
// [z^k] G = (1/k) [w^(k-1)] (1 - H(w)/w)^(-k).
inline Dense lagrange_inverse(const Dense& H) {
  const std::size_t len = H.size();
  Dense h(len, Rational(0));
  for (std::size_t i = 1; i < len; ++i) h[i - 1] = H[i];
  Dense one_minus(len, Rational(0));
  for (std::size_t i = 0; i < len; ++i) one_minus[i] = -h[i];
  one_minus[0] += 1;
  // inverse of (1 - h) by recurrence.
  Dense inv(len, Rational(0));
  inv[0] = 1 / one_minus[0];
  for (std::size_t k = 1; k < len; ++k) {
    Rational s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += one_minus[j] * inv[k - j];
    inv[k] = -s / one_minus[0];
  }
  Dense G(len, Rational(0));
  Dense pw(len, Rational(0));
  pw[0] = 1;
  for (std::size_t k = 1; k < len; ++k) {
    pw = dense_mul(pw, inv);
    G[k] = pw[k - 1] / Rational(static_cast<long>(k));
  }
  return G;
}

inline Dense to_dense(const SparsePoly& p, int D) {
  Dense d(static_cast<std::size_t>(D + 1), Rational(0));
  for (const auto& [m, c] : p.terms()) {
    const int e = m[p.vars().z(0)];
    if (e <= D) d[static_cast<std::size_t>(e)] = c;
  }
  return d;
}

// Lambda^m on xi^a z^b for n = 1 by direct differentiation.
inline Rational lambda_pow_monomial(int a, int b, int m) {
  if (m > a || m > b) return 0;
  Rational c = 1;
  for (int i = 0; i < m; ++i) c *= Rational((a - i) * (b - i));
  return c;
}

}  // namespace oracle

namespace oracle {

inline agcalc::SparsePoly zp(const char* text, int n) {
  return agcalc::parse_poly(text, agcalc::VarSet::of_z(n));
}
inline agcalc::SparsePoly xzp(const char* text, int n) {
  return agcalc::parse_poly(text, agcalc::VarSet::of_xi_z(n));
}
inline agcalc::SparsePoly ztp(const char* text, int n) {
  return agcalc::parse_poly(text, agcalc::VarSet::of_z_t(n));
}
inline agcalc::MapTuple map_of(int n, const std::vector<const char*>& comps) {
  std::vector<agcalc::SparsePoly> ps;
  for (const char* c : comps) ps.push_back(zp(c, n));
  return agcalc::MapTuple::from_polys(agcalc::VarSet::of_z(n), ps);
}

}  // namespace oracle
