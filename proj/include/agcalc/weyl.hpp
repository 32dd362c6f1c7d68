#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agcalc/multi_index.hpp"
#include "agcalc/poly.hpp"
#include "agcalc/report.hpp"
#include "agcalc/series.hpp"

namespace agcalc {

struct CanonicalLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return canonical_less(a, b); }
};

// Differential operator sum_alpha a_alpha(z) d^alpha in right-normal form.
// Keys are derivative exponents (slots 0..n-1), coefficients live over Z(n).
// `trunc`, when set, bounds the z-degree through which the coefficients are
// known.
class DiffOp {
 public:
  using Terms = std::map<Monomial, SparsePoly, CanonicalLess>;

  explicit DiffOp(int n, std::optional<int> trunc = std::nullopt);

  static DiffOp multiplication(const SparsePoly& a);
  static DiffOp derivative(const MultiIndex& alpha);
  static DiffOp term(const SparsePoly& a, const MultiIndex& alpha);

  int n() const { return n_; }
  VarSet coeff_vars() const { return VarSet::of_z(n_); }
  const Terms& terms() const { return terms_; }
  std::optional<int> trunc() const { return trunc_; }
  bool is_zero() const { return terms_.empty(); }
  // max |alpha| over stored terms, 0 for the zero operator.
  int max_order() const;

  // Adds a * d^alpha, dropping the entry if it cancels.
  void add_term(const Monomial& alpha, const SparsePoly& a);

  DiffOp& operator+=(const DiffOp& o);
  DiffOp operator-() const;
  bool operator==(const DiffOp& o) const;

 private:
  int n_;
  Terms terms_;
  std::optional<int> trunc_;
};

DiffOp operator+(DiffOp a, const DiffOp& b);
DiffOp operator-(const DiffOp& a, const DiffOp& b);

// "z1^2*d1^2 + z1*d1" style rendering; coefficients precede derivatives.
std::string to_string(const DiffOp& op);

// R: d^alpha -> xi^alpha positionally. Result lives over XiZ(n).
SparsePoly right_symbol(const DiffOp& op);
DiffOp from_right_symbol(const SparsePoly& f);
// L: the polynomial sum_beta b_beta(z) xi^beta with op = sum_beta d^beta b_beta.
SparsePoly left_symbol(const DiffOp& op);
// L^{-1}: reads f as sum_beta d^beta b_beta(z) and rewrites it in right-normal
// form with d^beta z^delta = sum_gamma C(beta,gamma) d^gamma(z^delta) d^(beta-gamma).
DiffOp normal_order(const SparsePoly& left, std::optional<int> trunc = std::nullopt);

// Composition phi o psi in right-normal form.
DiffOp op_mul(const DiffOp& phi, const DiffOp& psi);

// phi(u) mod degree > D. Needs u valid through D + max_order(phi).
SeriesTrunc apply(const DiffOp& phi, const SeriesTrunc& u, int D);

// tau(h d^alpha) = (-1)^|alpha| d^alpha h, extended linearly.
DiffOp tau(const DiffOp& phi);

// nu-grading: min over terms z^beta d^alpha of |beta| - |alpha|.
ExtendedInt nu(const DiffOp& op);

// Lambda = sum_i d_{xi_i} d_{z_i} on polynomials over XiZ / XiZT (t is a
// passive coefficient variable).
SparsePoly lambda(const SparsePoly& f);
SparsePoly lambda_pow(const SparsePoly& f, int m);
SeriesTrunc lambda(const SeriesTrunc& f);

// Phi = exp(Lambda) on an exact polynomial. Optional window bounds restrict
// the returned terms to xi-degree <= max_xi and z-degree <= max_z.
SparsePoly phi_apply(const SparsePoly& f, std::optional<int> max_xi = std::nullopt,
                     std::optional<int> max_z = std::nullopt);
// Series input is accepted only when exact; truncated series without an
// order profile have no well-defined window and are refused.
SparsePoly phi_apply(const SeriesTrunc& f, int max_xi, int max_z);

// A series over XiZ(n) given by its xi-homogeneous slices. Slice j has
// xi-degree j and z-order >= 2j, the profile of q(z) JF(z) exp(<xi, H>) for
// o(H) >= 2.
class XiSlicedSeries {
 public:
  XiSlicedSeries(int n, std::vector<SeriesTrunc> slices);

  int n() const { return n_; }
  int xi_max() const { return static_cast<int>(slices_.size()) - 1; }
  const std::vector<SeriesTrunc>& slices() const { return slices_; }

 private:
  int n_;
  std::vector<SeriesTrunc> slices_;
};

// Phi applied to a profiled series, exact in the window xi-degree <= K,
// z-degree <= D (K <= D). Output (k, d) draws on slice j = k + m only with
// m <= d - 2k, so slices j <= D valid through z-degree D + j suffice.
SparsePoly phi_apply(const XiSlicedSeries& f, int K, int D);

// Compares R(L^{-1}(f)) with Phi(f) exactly.
CheckResult verify_phi_is_RLinv(const SparsePoly& f);

}  // namespace agcalc
