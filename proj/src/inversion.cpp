#include "agcalc/inversion.hpp"

#include <algorithm>

#include "agcalc/errors.hpp"
#include "agcalc/multi_index.hpp"
#include "agcalc/weyl.hpp"

namespace agcalc {

std::string to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::FixedPoint: return "fixed_point";
    case InversionMethod::AbhyankarGurjar: return "abhyankar_gurjar";
    case InversionMethod::LambdaSeries: return "lambda_series";
  }
  return "unknown";
}

void CutoffAudit::record(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++violations;
    messages.push_back(what);
  }
}

void require_inversion_input(const MapTuple& H, int D) {
  if (D < 0) throw ContractError("truncation order must be non-negative");
  for (int i = 0; i < H.n(); ++i) {
    if (H[i].order_bound() < 2) {
      throw PreconditionError("H must have order >= 2 (component " + std::to_string(i + 1) +
                              " has order " + std::to_string(H[i].order_bound()) + ")");
    }
  }
  if (H.valid_through() < D) {
    throw ContractError("H is only known through degree " + std::to_string(H.valid_through()) +
                        ", inversion to degree " + std::to_string(D) + " requested");
  }
}

SeriesTrunc jacobian_of_f(const MapTuple& H, int cap) {
  PolyMatrix m = PolyMatrix::identity(H.vars(), H.n()) - jacobian(H);
  return det(m, cap);
}

SeriesTrunc jacobian_determinant(const MapTuple& G, int D) { return det(jacobian(G), D); }

namespace {

InversionResult make_result(const MapTuple& H, MapTuple G, InversionMethod method, int D) {
  G = G.truncated(D);
  MapTuple N = (G - MapTuple::identity(H.vars()).truncated(D)).truncated(D);
  return InversionResult{std::move(G), std::move(N), method, D};
}

long min_order(const MapTuple& H) {
  long o = kUnbounded;
  for (const auto& c : H.components()) o = std::min(o, c.order_bound());
  return o;
}

// sum_{|alpha| <= D - o(u)} (1/alpha!) d^alpha(u H^alpha w), w = JF or 1.
std::vector<SeriesTrunc> ag_sum(const std::vector<SeriesTrunc>& us, const MapTuple& H, int D,
                                bool with_jf, CutoffAudit* audit) {
  require_inversion_input(H, D);
  const VarSet& vars = H.vars();
  const int n = H.n();
  const int pow_cap = 2 * D + 2;
  const long o_h = min_order(H);

  int max_weight = 0;
  for (const auto& u : us) {
    if (!(u.vars() == vars)) throw ContractError("ag: series and map must share variables");
    if (u.valid_through() < D) {
      throw ContractError("ag: input series must be known through degree " + std::to_string(D));
    }
    max_weight = std::max(max_weight, static_cast<int>(D - std::min<long>(u.order_bound(), D)));
  }

  SeriesTrunc w = with_jf ? jacobian_of_f(H, pow_cap) : SeriesTrunc(SparsePoly::constant(vars, 1));

  std::vector<std::vector<SeriesTrunc>> powers(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& row = powers[static_cast<std::size_t>(j)];
    row.emplace_back(SparsePoly::constant(vars, 1));
    for (int k = 1; k <= max_weight + 1; ++k) row.push_back(mul(row.back(), H[j], pow_cap));
  }

  std::vector<SeriesTrunc> sums;
  for (std::size_t q = 0; q < us.size(); ++q) sums.emplace_back(SparsePoly(vars), D);

  auto term = [&](const SeriesTrunc& u, const MultiIndex& alpha, const SeriesTrunc& y) {
    const int cap = D + weight(alpha);
    SeriesTrunc x = mul(u, y, cap);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < alpha[static_cast<std::size_t>(j)]; ++k) x = diff(x, vars.z(j));
    }
    return x * Rational(1, factorial(alpha));
  };

  for (int a = 0; a <= max_weight + 1; ++a) {
    for (const auto& alpha : multi_indices_of_weight(n, a)) {
      const int cap = D + a;
      SeriesTrunc y(SparsePoly::constant(vars, 1));
      for (int j = 0; j < n; ++j) {
        y = mul(y, powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(alpha[j])], cap);
      }
      y = mul(y, w, cap);
      for (std::size_t q = 0; q < us.size(); ++q) {
        const SeriesTrunc& u = us[q];
        if (u.poly().is_zero() && u.is_exact()) continue;
        const long keep = D - std::min<long>(u.order_bound(), D);
        if (a <= keep) {
          SeriesTrunc t = term(u, alpha, y);
          if (t.valid_through() < D) {
            throw ContractError("ag: intermediate lost precision below degree " +
                                std::to_string(D));
          }
          sums[q] = sums[q] + t.truncated(D);
        } else if (audit && a == keep + 1) {
          // First dropped layer: evaluate and confirm nothing survives
          // through degree D. Later layers have order >= o(u) + |alpha|(o(H)-1),
          // increasing in |alpha| because o(H) >= 2.
          SeriesTrunc t = term(u, alpha, y);
          bool ok = t.valid_through() >= D && truncate(t.poly(), D).is_zero();
          long bound = u.order_bound() + static_cast<long>(a) * (o_h - 1);
          ok = ok && o_h >= 2 && bound > D;
          audit->record(ok, "ag cutoff |alpha|=" + std::to_string(a) + " leaks below degree " +
                                std::to_string(D + 1));
        }
      }
    }
  }
  return sums;
}

// k! sum_m Lambda^m(P^(m+k) q JF) / (m! (m+k)!) truncated at D, over (xi, z[, t]).
std::vector<SeriesTrunc> lambda_moments(const std::vector<SeriesTrunc>& qs, const MapTuple& H,
                                        int k, int D, CutoffAudit* audit) {
  require_inversion_input(H, D);
  if (k < 0) throw ContractError("xi moment order k must be non-negative");
  const VarSet zvars = H.vars();
  const VarSet xvars = zvars.with(true, zvars.has_t());
  const int pow_cap = 2 * D + 2;
  const long o_h = min_order(H);

  const SeriesTrunc P = pairing(H);
  const SeriesTrunc jf = [&] {
    SeriesTrunc j = jacobian_of_f(H, pow_cap);
    SparsePoly p = embed(j.poly(), xvars);
    return j.is_exact() ? SeriesTrunc(p) : SeriesTrunc(p, *j.trunc());
  }();

  int max_m = -1;
  std::vector<SeriesTrunc> xqs;
  for (const auto& q : qs) {
    if (!(q.vars() == zvars)) throw ContractError("lambda series: q and H must share variables");
    if (q.valid_through() < D) {
      throw ContractError("lambda series: q must be known through degree " + std::to_string(D));
    }
    SparsePoly p = embed(q.poly(), xvars);
    xqs.push_back(q.is_exact() ? SeriesTrunc(p) : SeriesTrunc(p, *q.trunc()));
    max_m = std::max(max_m, static_cast<int>(D - std::min<long>(q.order_bound(), D + 1) - 2L * k));
  }

  std::vector<SeriesTrunc> powers{SeriesTrunc(SparsePoly::constant(xvars, 1))};
  auto power = [&](int e) -> const SeriesTrunc& {
    while (static_cast<int>(powers.size()) <= e) powers.push_back(mul(powers.back(), P, pow_cap));
    return powers[static_cast<std::size_t>(e)];
  };

  const Rational k_fact = Rational(factorial(static_cast<unsigned>(k)));
  std::vector<SeriesTrunc> sums;
  for (std::size_t i = 0; i < qs.size(); ++i) sums.emplace_back(SparsePoly(xvars), D);

  for (int m = 0; m <= max_m + 1; ++m) {
    const int cap = D + m;
    SeriesTrunc y = mul(power(m + k), jf, cap);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const SeriesTrunc& q = xqs[i];
      if (q.poly().is_zero() && q.is_exact()) continue;
      const long keep = D - std::min<long>(q.order_bound(), D + 1) - 2L * k;
      const bool kept = m <= keep;
      const bool audited = audit && m == std::max(keep + 1, 0L);
      if (!kept && !audited) continue;
      SeriesTrunc x = mul(q, y, cap);
      for (int s = 0; s < m; ++s) x = lambda(x);
      Rational c = k_fact / Rational(factorial(static_cast<unsigned>(m)) *
                                     factorial(static_cast<unsigned>(m + k)));
      if (kept) {
        if (x.valid_through() < D) {
          throw ContractError("lambda series: intermediate lost precision below degree " +
                              std::to_string(D));
        }
        sums[i] = sums[i] + (x * c).truncated(D);
      } else {
        bool ok = x.valid_through() >= D && truncate(x.poly(), D).is_zero();
        long bound = q.order_bound() + static_cast<long>(m + k) * o_h - m;
        ok = ok && o_h >= 2 && bound > D;
        audit->record(ok, "lambda cutoff m=" + std::to_string(m) + " leaks below degree " +
                              std::to_string(D + 1));
      }
    }
  }
  return sums;
}

}  // namespace

SeriesTrunc pairing(const MapTuple& H) {
  const VarSet xvars = H.vars().with(true, H.vars().has_t());
  SeriesTrunc sum{SparsePoly(xvars)};
  for (int i = 0; i < H.n(); ++i) {
    SparsePoly hi = embed(H[i].poly(), xvars);
    SeriesTrunc h = H[i].is_exact() ? SeriesTrunc(hi) : SeriesTrunc(hi, *H[i].trunc());
    sum = sum + mul(SeriesTrunc(SparsePoly::variable(xvars, xvars.xi(i))), h);
  }
  return sum;
}

InversionResult invert_fixed_point(const MapTuple& H, int D) {
  require_inversion_input(H, D);
  const MapTuple z = MapTuple::identity(H.vars());
  MapTuple N = MapTuple::zero(H.vars()).truncated(D);
  // Each pass fixes at least one more degree since o(H) >= 2.
  for (int iter = 0; iter <= D + 1; ++iter) {
    MapTuple next = compose(H, z + N, D);
    if (next == N) return make_result(H, z + N, InversionMethod::FixedPoint, D);
    N = std::move(next);
  }
  throw ContractError("fixed-point inversion did not stabilise within D+1 iterations");
}

InversionResult invert_ag(const MapTuple& H, int D, CutoffAudit* audit) {
  std::vector<SeriesTrunc> us;
  for (int i = 0; i < H.n(); ++i) us.emplace_back(SparsePoly::variable(H.vars(), H.vars().z(i)));
  auto g = ag_sum(us, H, D, true, audit);
  return make_result(H, MapTuple(H.vars(), std::move(g)), InversionMethod::AbhyankarGurjar, D);
}

SeriesTrunc ag_apply(const SeriesTrunc& u, const MapTuple& H, int D, CutoffAudit* audit) {
  return ag_sum({u}, H, D, true, audit).front();
}

CheckResult ag_proof_identity(const SeriesTrunc& u, const MapTuple& H, int D) {
  SeriesTrunc lhs = ag_sum({u}, H, D, false, nullptr).front();
  // JG needs G one degree deeper than the window.
  MapTuple G = invert_fixed_point(H, D + 1).G;
  SeriesTrunc jg = jacobian_determinant(G, D);
  SeriesTrunc rhs = mul(jg, compose(u, G, D), D);
  CheckResult r = check_equal("ag_proof_identity", truncate(lhs.poly(), D), truncate(rhs.poly(), D));
  r.detail = "u = " + to_string(u.poly());
  return r;
}

InversionResult invert_lambda(const MapTuple& H, int D, CutoffAudit* audit) {
  std::vector<SeriesTrunc> qs;
  for (int i = 0; i < H.n(); ++i) qs.emplace_back(SparsePoly::variable(H.vars(), H.vars().z(i)));
  auto sums = lambda_moments(qs, H, 0, D, audit);
  std::vector<SeriesTrunc> g;
  for (const auto& s : sums) {
    // Any xi left over means the degree-0 slice was assembled wrongly.
    if (!(xi_degree(s.poly()) <= ExtendedInt::finite(0))) {
      throw std::logic_error("lambda inversion produced a term with xi-degree > 0");
    }
    g.emplace_back(embed(s.poly(), H.vars()), D);
  }
  return make_result(H, MapTuple(H.vars(), std::move(g)), InversionMethod::LambdaSeries, D);
}

SeriesTrunc q_compose_G(const SeriesTrunc& q, const MapTuple& H, int D, CutoffAudit* audit) {
  SeriesTrunc s = lambda_moments({q}, H, 0, D, audit).front();
  if (!(xi_degree(s.poly()) <= ExtendedInt::finite(0))) {
    throw std::logic_error("q(G) series produced a term with xi-degree > 0");
  }
  return SeriesTrunc(embed(s.poly(), H.vars()), D);
}

SparsePoly xi_moment_series(const MapTuple& H, const SeriesTrunc& q, int k, int D,
                            CutoffAudit* audit) {
  if (k < 0) throw ContractError("xi moment order k must be non-negative");
  return truncate(lambda_moments({q}, H, k, D, audit).front().poly(), D);
}

CheckResult verify_phi_identity(const MapTuple& H, const SeriesTrunc& q, int K, int D) {
  require_inversion_input(H, D);
  if (K > D) throw ContractError("window rule: xi-degree bound K must not exceed D");
  const VarSet zvars = H.vars();
  if (zvars.kind() != VarKind::Z) throw ContractError("phi identity works over z only");
  const VarSet xvars = VarSet::of_xi_z(H.n());

  // Left: Phi(q JF exp(P)), slices q JF P^j / j! for j <= D, slice j through D + j.
  const SeriesTrunc P = pairing(H);
  SeriesTrunc qjf = mul(q, jacobian_of_f(H, 2 * D + 1), 2 * D + 1);
  SeriesTrunc base = [&] {
    SparsePoly p = embed(qjf.poly(), xvars);
    return qjf.is_exact() ? SeriesTrunc(p) : SeriesTrunc(p, *qjf.trunc());
  }();
  std::vector<SeriesTrunc> slices;
  SeriesTrunc pj(SparsePoly::constant(xvars, 1));
  Rational inv_fact = 1;
  for (int j = 0; j <= D; ++j) {
    if (j > 0) {
      pj = mul(pj, P, 2 * D + 1);
      inv_fact /= j;
    }
    slices.push_back(mul(base, pj, D + j) * inv_fact);
  }
  SparsePoly lhs = phi_apply(XiSlicedSeries(H.n(), std::move(slices)), K, D);

  // Right: q(G) exp(<xi, N>) from the oracle inverse.
  InversionResult inv = invert_fixed_point(H, D);
  SparsePoly qg = embed(compose(q, inv.G, D).poly(), xvars);
  SparsePoly pn = pairing(inv.N).poly();
  SparsePoly rhs(xvars);
  SparsePoly pn_k = SparsePoly::constant(xvars, 1);
  Rational k_inv_fact = 1;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      pn_k = mul(pn_k, pn, D);
      k_inv_fact /= k;
    }
    rhs += mul(qg, pn_k, D) * k_inv_fact;
  }
  CheckResult r = check_equal("phi_identity", restrict_window(lhs, K, D),
                              restrict_window(rhs, K, D));
  r.detail = "window K=" + std::to_string(K) + " D=" + std::to_string(D);
  return r;
}

std::vector<CheckResult> round_trip_checks(const MapTuple& H, const MapTuple& G, int D) {
  const MapTuple z = MapTuple::identity(H.vars());
  const MapTuple F = z - H;
  MapTuple fg = compose(F, G, D);
  MapTuple gf = compose(G, F, D);
  std::vector<CheckResult> out;
  for (int i = 0; i < H.n(); ++i) {
    SparsePoly zi = z[i].poly();
    out.push_back(check_equal("F(G)_" + std::to_string(i + 1), fg[i].poly(), zi));
    out.push_back(check_equal("G(F)_" + std::to_string(i + 1), gf[i].poly(), zi));
  }
  return out;
}

CheckResult chain_rule_check(const MapTuple& H, const MapTuple& G, int D) {
  if (G.valid_through() < D + 1) {
    throw ContractError("chain rule check needs G through degree " + std::to_string(D + 1));
  }
  SeriesTrunc jf = jacobian_of_f(H, D);
  SeriesTrunc jf_of_g = compose(jf, G, D);
  SeriesTrunc jg = jacobian_determinant(G, D);
  SeriesTrunc prod = mul(jf_of_g, jg, D);
  return check_equal("JF(G)*JG", truncate(prod.poly(), D), SparsePoly::constant(H.vars(), 1));
}

}  // namespace agcalc
