#include "agcalc/jacobian_lab.hpp"

#include <cstdlib>
#include <string>

#include "agcalc/inversion.hpp"
#include "agcalc/weyl.hpp"

namespace agcalc {

namespace {

void require_lab_input(const MapTuple& H, const char* what) {
  if (H.vars().kind() != VarKind::Z) {
    throw ContractError(std::string(what) + ": expects a map over z");
  }
  if (!H.is_exact()) {
    throw ContractError(std::string(what) + ": truncated series are refused, H must be polynomial");
  }
  if (H.order() < ExtendedInt::finite(2)) {
    throw PreconditionError(std::string(what) + ": H must have order >= 2");
  }
}

MapTuple deformation(const MapTuple& H) {
  const VarSet zt = VarSet::of_z_t(H.n());
  return scale(embed(H, zt), SparsePoly::variable(zt, zt.t()));
}

Rational factorial_q(int k) { return Rational(factorial(static_cast<unsigned>(k))); }

SparsePoly t_power(VarSet vars, int m) {
  Monomial tm;
  tm.set(vars.t(), m);
  return SparsePoly::term(vars, tm, 1);
}

// Requires m_max >= 0; the public entry points validate further.
VanishingReport scan(const SparsePoly& P, int k, int m_max, std::size_t ceiling,
                     const std::string& map_id) {
  if (!P.vars().has_xi()) throw ContractError("vanishing scan: P must involve xi variables");
  if (k != 0 && k != 1) throw ContractError("vanishing scan: offset k must be 0 or 1");
  VanishingReport r;
  r.map_id = map_id;
  r.k = k;
  r.m_max = m_max;
  auto guard = [&](std::size_t terms, int m, const char* stage) {
    if (terms <= ceiling) return;
    r.complete = false;
    throw ScanAborted("term ceiling " + std::to_string(ceiling) + " exceeded at m=" +
                          std::to_string(m) + " (" + stage + ", " + std::to_string(terms) +
                          " terms)",
                      r);
  };
  SparsePoly power = k == 0 ? SparsePoly::constant(P.vars(), 1) : P;
  const int m_start = k == 0 ? 1 : 0;
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) {
      power = mul(power, P);
      guard(power.size(), m, "power");
    }
    if (m < m_start) continue;
    SparsePoly v = power;
    for (int s = 0; s < m && !v.is_zero(); ++s) {
      v = lambda(v);
      guard(v.size(), m, "Lambda");
    }
    if (!v.is_zero()) {
      if (!r.first_nonzero) r.first_nonzero = m;
      r.last_nonzero = m;
    }
    r.values.push_back({m, std::move(v)});
  }
  return r;
}

// Pairing of exact components with xi over `xvars`.
SparsePoly pair_with_xi(const std::vector<SparsePoly>& comps, VarSet xvars) {
  SparsePoly out(xvars);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    out += mul(SparsePoly::variable(xvars, xvars.xi(static_cast<int>(i))), embed(comps[i], xvars));
  }
  return out;
}

}  // namespace

std::size_t term_ceiling_from_env() {
  const char* raw = std::getenv("AGCALC_TERM_CEILING");
  if (raw == nullptr || *raw == '\0') return kDefaultTermCeiling;
  std::string s(raw);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (s.front() == '-' || s.front() == '+') throw std::invalid_argument(s);
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("AGCALC_TERM_CEILING must be a positive integer, got '" + s + "'");
  }
  if (pos != s.size() || v == 0) {
    throw ParseError("AGCALC_TERM_CEILING must be a positive integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

NilpotencyResult is_nilpotent(const MapTuple& H) {
  require_lab_input(H, "is_nilpotent");
  const MapTuple Ht = deformation(H);
  const VarSet& zt = Ht.vars();
  SeriesTrunc d = det(PolyMatrix::identity(zt, H.n()) - jacobian(Ht));
  NilpotencyResult r{false, d.poly()};
  r.nilpotent = r.certificate == SparsePoly::constant(zt, 1);
  return r;
}

SparsePoly pairing_poly(const MapTuple& H) {
  require_lab_input(H, "pairing");
  std::vector<SparsePoly> comps;
  for (const auto& c : H.components()) comps.push_back(c.poly());
  return pair_with_xi(comps, VarSet::of_xi_z(H.n()));
}

VanishingReport vanishing_scan(const MapTuple& H, int k, int m_max, std::size_t ceiling,
                               const std::string& map_id) {
  if (m_max < 1) throw ContractError("vanishing scan: m_max must be >= 1");
  return scan(pairing_poly(H), k, m_max, ceiling, map_id);
}

VanishingReport vanishing_scan_general(const SparsePoly& P, int k, int m_max, std::size_t ceiling,
                                       const std::string& map_id) {
  if (m_max < 1) throw ContractError("vanishing scan: m_max must be >= 1");
  if (P.vars().kind() != VarKind::XiZ) throw ContractError("vanishing scan: P must be over (xi, z)");
  return scan(P, k, m_max, ceiling, map_id);
}

GtSeriesResult jacobian_Gt_series(const MapTuple& H, int m_max, std::size_t ceiling) {
  require_lab_input(H, "jacobian_Gt_series");
  if (m_max < 0) throw ContractError("jacobian_Gt_series: m_max must be >= 0");
  const VarSet zt = VarSet::of_z_t(H.n());

  SparsePoly series = SparsePoly::constant(zt, 1);
  if (m_max >= 1) {
    VanishingReport r = scan(pairing_poly(H), 0, m_max, ceiling, "");
    for (const auto& [m, v] : r.values) {
      Rational c = 1 / (factorial_q(m) * factorial_q(m));
      series += mul(t_power(zt, m), embed(v, zt)) * c;
    }
  }

  // Coefficient of t^m in JG_t has z-degree <= m (deg H - 1), so the inverse
  // is needed through one degree more than m_max (deg H - 1).
  SparsePoly oracle = SparsePoly::constant(zt, 1);
  std::string window = "t-degree <= " + std::to_string(m_max);
  if (!H.degree().is_neg_inf()) {
    const int d = H.degree().value();
    const int dz = m_max * (d - 1) + 1;
    MapTuple G = invert_fixed_point(deformation(H), dz).G;
    oracle = restrict_window(jacobian_determinant(G, dz - 1).poly(), std::nullopt, dz - 1, m_max);
    window += ", z-degree <= " + std::to_string(dz - 1);
  }
  CheckResult check = check_equal("JG_t_series_vs_oracle", series, oracle);
  check.detail = window;
  return GtSeriesResult{std::move(series), std::move(check)};
}

NtSeriesResult Nt_series(const MapTuple& H, int m_max, std::size_t ceiling) {
  require_lab_input(H, "Nt_series");
  if (m_max < 0) throw ContractError("Nt_series: m_max must be >= 0");
  NilpotencyResult nil = is_nilpotent(H);
  if (!nil.nilpotent) {
    throw PreconditionError(
        "Nt_series: the N_t series identity assumes a polynomial map with nilpotent JH, but "
        "det(I - tJH) = " +
        to_string(nil.certificate));
  }
  const int n = H.n();
  const VarSet zt = VarSet::of_z_t(n);
  const VarSet xzt = VarSet::of_xi_z_t(n);

  SparsePoly series(xzt);
  VanishingReport r = scan(pairing_poly(H), 1, m_max, ceiling, "");
  for (const auto& [m, v] : r.values) {
    Rational c = 1 / (factorial_q(m) * factorial_q(m + 1));
    series += mul(t_power(xzt, m), embed(v, xzt)) * c;
  }

  std::vector<std::vector<SparsePoly::Term>> comp_terms(static_cast<std::size_t>(n));
  for (const auto& [mono, c] : series.terms()) {
    for (int i = 0; i < n; ++i) {
      if (mono[xzt.xi(i)] == 0) continue;
      Monomial out;
      for (int j = 0; j < n; ++j) out.set(zt.z(j), mono[xzt.z(j)]);
      out.set(zt.t(), mono[xzt.t()]);
      comp_terms[static_cast<std::size_t>(i)].emplace_back(out, c);
    }
  }
  std::vector<SparsePoly> comps;
  for (auto& terms : comp_terms) comps.push_back(SparsePoly::from_terms(zt, std::move(terms)));
  MapTuple N_t = MapTuple::from_polys(zt, comps);

  // Coefficient of t^m in N_t has z-degree <= (m + 1)(deg H - 1) + 1.
  std::vector<SparsePoly> oracle(static_cast<std::size_t>(n), SparsePoly(zt));
  std::string window = "t-degree <= " + std::to_string(m_max);
  if (!H.degree().is_neg_inf()) {
    const int d = H.degree().value();
    const int dz = (m_max + 1) * (d - 1) + 1;
    InversionResult inv = invert_fixed_point(deformation(H), dz);
    Monomial t1;
    t1.set(zt.t(), 1);
    for (int i = 0; i < n; ++i) {
      oracle[static_cast<std::size_t>(i)] =
          restrict_window(divide_by_monomial(inv.N[i].poly(), t1), std::nullopt, std::nullopt, m_max);
    }
    window += ", z-degree <= " + std::to_string(dz);
  }
  CheckResult check = check_equal("Nt_series_vs_oracle", series, pair_with_xi(oracle, xzt));
  check.detail = window;
  return NtSeriesResult{std::move(series), std::move(N_t), std::move(check)};
}

EquivalenceReport check_equivalences(const MapTuple& H, int m_max, const InstanceFacts& facts,
                                     std::size_t ceiling, const std::string& map_id) {
  require_lab_input(H, "check_equivalences");
  if (m_max < 1) throw ContractError("check_equivalences: m_max must be >= 1");
  const int n = H.n();
  EquivalenceReport rep{map_id, false, SparsePoly(VarSet::of_z_t(n)), {}, {}, {}, {}, {}, {}};

  NilpotencyResult nil = is_nilpotent(H);
  rep.nilpotent = nil.nilpotent;
  rep.certificate = nil.certificate;
  rep.scan0 = vanishing_scan(H, 0, m_max, ceiling, map_id);

  // Lambda(P) is the trace of JH.
  {
    const VarSet xz = VarSet::of_xi_z(n);
    SparsePoly trace(xz);
    for (int i = 0; i < n; ++i) trace += embed(diff(H[i].poly(), H.vars().z(i)), xz);
    rep.checks.push_back(check_equal("Lambda(P)_is_trace_JH", rep.scan0.values.front().value, trace));
  }

  {
    CheckResult c;
    c.name = "nilpotent_iff_scan0_vanishes";
    c.pass = nil.nilpotent == !rep.scan0.first_nonzero.has_value();
    c.detail = std::string("det(I - tJH) = ") + to_string(nil.certificate) + "; scan0 " +
               (rep.scan0.first_nonzero ? "nonzero at m=" + std::to_string(*rep.scan0.first_nonzero)
                                        : "zero for 1 <= m <= " + std::to_string(m_max));
    rep.checks.push_back(std::move(c));
  }

  if (!nil.nilpotent) {
    rep.witness_m = rep.scan0.first_nonzero;
    CheckResult c;
    c.name = "witness_within_n";
    c.pass = rep.witness_m.has_value() && *rep.witness_m <= n;
    if (rep.witness_m) {
      const auto& v = rep.scan0.values[static_cast<std::size_t>(*rep.witness_m - 1)].value;
      c.detail = "Lambda^" + std::to_string(*rep.witness_m) + "(P^" +
                 std::to_string(*rep.witness_m) + ") = " + to_string(v);
    } else {
      c.detail = "no witness for m <= " + std::to_string(m_max);
    }
    rep.checks.push_back(std::move(c));
    rep.skipped.push_back("stabilization: JH not nilpotent");
    rep.skipped.push_back("JG_t consistency: JH not nilpotent");
    return rep;
  }

  rep.scan1 = vanishing_scan(H, 1, m_max, ceiling, map_id);
  rep.stabilization_index = rep.scan1->last_nonzero;

  GtSeriesResult gt = jacobian_Gt_series(H, m_max, ceiling);
  rep.checks.push_back(gt.oracle);
  rep.checks.push_back(check_equal("JG_t_is_one", gt.series,
                                   SparsePoly::constant(gt.series.vars(), 1)));

  NtSeriesResult nt = Nt_series(H, m_max, ceiling);
  rep.checks.push_back(nt.oracle);

  if (!facts.known_inverse_t_degree) {
    rep.skipped.push_back("stabilization: no known inverse t-degree");
  } else if (*facts.known_inverse_t_degree >= m_max) {
    rep.skipped.push_back("stabilization: m_max must exceed the known t-degree " +
                          std::to_string(*facts.known_inverse_t_degree));
  } else {
    const int d = *facts.known_inverse_t_degree;
    rep.scan1->stabilized = rep.stabilization_index == d;
    CheckResult c;
    c.name = "stabilization_index";
    c.pass = *rep.scan1->stabilized;
    c.detail = "expected " + std::to_string(d) + ", observed " +
               (rep.stabilization_index ? std::to_string(*rep.stabilization_index) : "none");
    rep.checks.push_back(std::move(c));

    CheckResult b;
    b.name = "Nt_t_degree_bounded";
    b.pass = t_degree(nt.series) <= ExtendedInt::finite(d);
    b.detail = "t-degree " + t_degree(nt.series).to_string() + " <= " + std::to_string(d);
    rep.checks.push_back(std::move(b));

    if (facts.known_inverse) {
      const VarSet zt = VarSet::of_z_t(n);
      for (int i = 0; i < n; ++i) {
        SparsePoly g = SparsePoly::variable(zt, zt.z(i)) + substitute_t(nt.N_t[i].poly(), 1);
        rep.checks.push_back(check_equal("known_inverse_component_" + std::to_string(i + 1), g,
                                         embed((*facts.known_inverse)[i].poly(), zt)));
      }
    }
  }
  if (!facts.known_inverse) rep.skipped.push_back("known inverse comparison: none supplied");
  return rep;
}

}  // namespace agcalc
