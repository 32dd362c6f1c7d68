#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "agcalc/report.hpp"
#include "agcalc/series.hpp"

namespace agcalc {

enum class InversionMethod { FixedPoint, AbhyankarGurjar, LambdaSeries };

std::string to_string(InversionMethod m);

// Formal inverse G = z + N of F = z - H, valid mod z-degree > D.
struct InversionResult {
  MapTuple G;
  MapTuple N;
  InversionMethod method;
  int D;
};

// Runtime verification of summation cutoffs. Every place a formula drops an
// infinite tail records one check here; a violation means a dropped term
// reaches degree <= D.
struct CutoffAudit {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;

  void record(bool ok, const std::string& what);
};

// Throws PreconditionError unless o(H) >= 2 and ContractError unless H is
// known through degree D.
void require_inversion_input(const MapTuple& H, int D);

// JF = det(I - JH) for F = z - H, kept through degree `cap`.
SeriesTrunc jacobian_of_f(const MapTuple& H, int cap);
// det(dG_i / dz_j) through degree D.
SeriesTrunc jacobian_determinant(const MapTuple& G, int D);

// Oracle: N <- H(z + N) until stable. Works over Z(n) and Z(n)+t.
InversionResult invert_fixed_point(const MapTuple& H, int D);

// G = sum_alpha (1/alpha!) d^alpha(z H^alpha JF), |alpha| <= D.
InversionResult invert_ag(const MapTuple& H, int D, CutoffAudit* audit = nullptr);

// u(G) = sum_alpha (1/alpha!) d^alpha(u H^alpha JF).
SeriesTrunc ag_apply(const SeriesTrunc& u, const MapTuple& H, int D,
                     CutoffAudit* audit = nullptr);

// Compares sum_alpha (1/alpha!) d^alpha(H^alpha u) with JG * u(G), where G
// comes from the fixed-point oracle.
CheckResult ag_proof_identity(const SeriesTrunc& u, const MapTuple& H, int D);

// G = sum_m Lambda^m(z P^m JF) / (m!)^2 with P = <xi, H>, m <= D - 1.
InversionResult invert_lambda(const MapTuple& H, int D, CutoffAudit* audit = nullptr);

// q(G) = sum_m Lambda^m(P^m q JF) / (m!)^2.
SeriesTrunc q_compose_G(const SeriesTrunc& q, const MapTuple& H, int D,
                        CutoffAudit* audit = nullptr);

// k! sum_m Lambda^m(P^(m+k) q JF) / (m! (m+k)!), which equals q(G) <xi, N>^k.
// Returned over (xi, z), xi-homogeneous of degree k, z-degree <= D.
SparsePoly xi_moment_series(const MapTuple& H, const SeriesTrunc& q, int k, int D,
                            CutoffAudit* audit = nullptr);

// The pairing <xi, H> over (xi, z) (or (xi, z, t) when H carries t).
SeriesTrunc pairing(const MapTuple& H);

// Phi(q JF exp(<xi,H>)) against q(G) exp(<xi,N>) in the window
// xi-degree <= K, z-degree <= D. Requires K <= D.
CheckResult verify_phi_identity(const MapTuple& H, const SeriesTrunc& q, int K, int D);

// F(G) = z and G(F) = z mod degree > D.
std::vector<CheckResult> round_trip_checks(const MapTuple& H, const MapTuple& G, int D);

// JF(G) * JG = 1 mod degree > D.
CheckResult chain_rule_check(const MapTuple& H, const MapTuple& G, int D);

}  // namespace agcalc
