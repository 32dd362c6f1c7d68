#include "agcalc/weyl.hpp"

#include <algorithm>
#include <unordered_map>

#include "agcalc/errors.hpp"

namespace agcalc {

namespace {

using Accumulator = std::unordered_map<Monomial, Rational, MonomialHash>;

SparsePoly collect(VarSet vars, Accumulator& acc) {
  std::vector<SparsePoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.emplace_back(m, std::move(c));
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

MultiIndex to_multi_index(const Monomial& m, int n) {
  MultiIndex a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = m[i];
  return a;
}

Monomial from_multi_index(const MultiIndex& a) {
  Monomial m;
  for (std::size_t i = 0; i < a.size(); ++i) m.set(static_cast<int>(i), a[i]);
  return m;
}

int weight_of(const Monomial& alpha, int n) { return alpha.total(0, n); }

// d^gamma applied to a polynomial over Z(n).
SparsePoly diff_multi(SparsePoly p, const MultiIndex& gamma) {
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (int k = 0; k < gamma[i]; ++k) {
      if (p.is_zero()) return p;
      p = diff(p, p.vars().z(static_cast<int>(i)));
    }
  }
  return p;
}

std::optional<int> min_trunc(std::optional<int> a, std::optional<int> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

std::optional<int> shifted(std::optional<int> t, int delta) {
  if (!t) return t;
  return std::max(*t - delta, -1);
}

void require_xi_z(const SparsePoly& f, const char* what) {
  if (f.vars().kind() != VarKind::XiZ) {
    throw ContractError(std::string(what) + ": expected a polynomial over (xi, z)");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DiffOp

DiffOp::DiffOp(int n, std::optional<int> trunc) : n_(n), trunc_(trunc) {
  if (n < 1) throw ContractError("operator needs at least one variable");
}

DiffOp DiffOp::multiplication(const SparsePoly& a) { return term(a, MultiIndex(a.vars().n(), 0)); }

DiffOp DiffOp::derivative(const MultiIndex& alpha) {
  VarSet vars = VarSet::of_z(static_cast<int>(alpha.size()));
  return term(SparsePoly::constant(vars, 1), alpha);
}

DiffOp DiffOp::term(const SparsePoly& a, const MultiIndex& alpha) {
  if (a.vars().kind() != VarKind::Z || a.vars().n() != static_cast<int>(alpha.size())) {
    throw ContractError("operator coefficients must be polynomials in z");
  }
  DiffOp op(static_cast<int>(alpha.size()));
  op.add_term(from_multi_index(alpha), a);
  return op;
}

int DiffOp::max_order() const {
  int best = 0;
  for (const auto& [alpha, a] : terms_) best = std::max(best, weight_of(alpha, n_));
  return best;
}

void DiffOp::add_term(const Monomial& alpha, const SparsePoly& a) {
  if (a.is_zero()) return;
  if (!(a.vars() == coeff_vars())) throw ContractError("operator coefficient variable mismatch");
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    SparsePoly c = trunc_ ? truncate(a, *trunc_) : a;
    if (!c.is_zero()) terms_.emplace(alpha, std::move(c));
    return;
  }
  it->second += a;
  if (trunc_) it->second = truncate(it->second, *trunc_);
  if (it->second.is_zero()) terms_.erase(it);
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (o.n_ != n_) throw ContractError("operator arity mismatch");
  trunc_ = min_trunc(trunc_, o.trunc_);
  if (trunc_) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second = truncate(it->second, *trunc_);
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
  }
  for (const auto& [alpha, a] : o.terms_) add_term(alpha, a);
  return *this;
}

DiffOp DiffOp::operator-() const {
  DiffOp out = *this;
  for (auto& [alpha, a] : out.terms_) a = -a;
  return out;
}

bool DiffOp::operator==(const DiffOp& o) const {
  return n_ == o.n_ && trunc_ == o.trunc_ && terms_ == o.terms_;
}

DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

std::string to_string(const DiffOp& op) {
  SparsePoly sym = right_symbol(op);
  if (sym.is_zero()) return "0";
  const VarSet& vars = sym.vars();
  const int n = op.n();
  std::string out;
  for (const auto& [m, c] : sym.terms()) {
    std::string factors;
    auto append = [&](const std::string& name, int e) {
      if (e == 0) return;
      if (!factors.empty()) factors += '*';
      factors += name;
      if (e > 1) factors += '^' + std::to_string(e);
    };
    for (int i = 0; i < n; ++i) append("z" + std::to_string(i + 1), m[vars.z(i)]);
    for (int i = 0; i < n; ++i) append("d" + std::to_string(i + 1), m[vars.xi(i)]);
    std::string term;
    if (factors.empty()) {
      term = to_string(c);
    } else if (c == 1) {
      term = factors;
    } else if (c == -1) {
      term = "-" + factors;
    } else {
      term = to_string(c) + "*" + factors;
    }
    if (out.empty()) {
      out = term;
    } else if (term.front() == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbols and normal ordering

SparsePoly right_symbol(const DiffOp& op) {
  const VarSet vars = VarSet::of_xi_z(op.n());
  std::vector<SparsePoly::Term> terms;
  for (const auto& [alpha, a] : op.terms()) {
    for (const auto& [zm, c] : a.terms()) {
      Monomial m;
      for (int i = 0; i < op.n(); ++i) {
        m.set(vars.xi(i), alpha[i]);
        m.set(vars.z(i), zm[i]);
      }
      terms.emplace_back(m, c);
    }
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

DiffOp from_right_symbol(const SparsePoly& f) {
  require_xi_z(f, "from_right_symbol");
  const VarSet& vars = f.vars();
  const int n = vars.n();
  const VarSet zvars = VarSet::of_z(n);
  std::map<Monomial, std::vector<SparsePoly::Term>, CanonicalLess> grouped;
  for (const auto& [m, c] : f.terms()) {
    Monomial alpha;
    Monomial zm;
    for (int i = 0; i < n; ++i) {
      alpha.set(i, m[vars.xi(i)]);
      zm.set(i, m[vars.z(i)]);
    }
    grouped[alpha].emplace_back(zm, c);
  }
  DiffOp op(n);
  for (auto& [alpha, terms] : grouped) {
    op.add_term(alpha, SparsePoly::from_terms(zvars, std::move(terms)));
  }
  return op;
}

SparsePoly left_symbol(const DiffOp& op) {
  // a d^alpha = sum_gamma (-1)^|gamma| C(alpha, gamma) d^(alpha-gamma) (d^gamma a)
  const int n = op.n();
  const VarSet vars = VarSet::of_xi_z(n);
  SparsePoly out(vars);
  for (const auto& [alpha_m, a] : op.terms()) {
    MultiIndex alpha = to_multi_index(alpha_m, n);
    for (const auto& gamma : sub_indices(alpha)) {
      SparsePoly da = diff_multi(a, gamma);
      if (da.is_zero()) continue;
      Rational c = Rational(binomial(alpha, gamma));
      if (weight(gamma) % 2 == 1) c = -c;
      Monomial xi;
      for (int i = 0; i < n; ++i) {
        xi.set(vars.xi(i), alpha[static_cast<std::size_t>(i)] - gamma[static_cast<std::size_t>(i)]);
      }
      out += mul(SparsePoly::term(vars, xi, c), embed(da, vars));
    }
  }
  return out;
}

DiffOp normal_order(const SparsePoly& left, std::optional<int> trunc) {
  require_xi_z(left, "normal_order");
  const VarSet& vars = left.vars();
  const int n = vars.n();
  Accumulator acc;
  int max_beta = 0;
  for (const auto& [m, c] : left.terms()) {
    MultiIndex beta(static_cast<std::size_t>(n));
    MultiIndex delta(static_cast<std::size_t>(n));
    MultiIndex common(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      beta[ui] = m[vars.xi(i)];
      delta[ui] = m[vars.z(i)];
      common[ui] = std::min(beta[ui], delta[ui]);
    }
    max_beta = std::max(max_beta, weight(beta));
    for (const auto& gamma : sub_indices(common)) {
      Rational coeff = c * Rational(binomial(beta, gamma) * falling_factorial(delta, gamma));
      Monomial out;
      for (int i = 0; i < n; ++i) {
        auto ui = static_cast<std::size_t>(i);
        out.set(vars.xi(i), beta[ui] - gamma[ui]);
        out.set(vars.z(i), delta[ui] - gamma[ui]);
      }
      acc[out] += coeff;
    }
  }
  DiffOp exact = from_right_symbol(collect(vars, acc));
  if (!trunc) return exact;
  DiffOp windowed(n, shifted(trunc, max_beta));
  for (const auto& [alpha, a] : exact.terms()) windowed.add_term(alpha, a);
  return windowed;
}

DiffOp op_mul(const DiffOp& phi, const DiffOp& psi) {
  if (phi.n() != psi.n()) throw ContractError("operator arity mismatch");
  const int n = phi.n();
  std::optional<int> trunc = min_trunc(phi.trunc(), shifted(psi.trunc(), phi.max_order()));
  DiffOp out(n, trunc);
  // (a d^alpha)(b d^beta) = sum_gamma C(alpha, gamma) a (d^gamma b) d^(alpha - gamma + beta)
  for (const auto& [alpha_m, a] : phi.terms()) {
    MultiIndex alpha = to_multi_index(alpha_m, n);
    for (const auto& gamma : sub_indices(alpha)) {
      Rational c = Rational(binomial(alpha, gamma));
      Monomial rest;
      for (int i = 0; i < n; ++i) {
        rest.set(i, alpha[static_cast<std::size_t>(i)] - gamma[static_cast<std::size_t>(i)]);
      }
      for (const auto& [beta_m, b] : psi.terms()) {
        SparsePoly db = diff_multi(b, gamma);
        if (db.is_zero()) continue;
        out.add_term(rest * beta_m, mul(a, db, trunc) * c);
      }
    }
  }
  return out;
}

SeriesTrunc apply(const DiffOp& phi, const SeriesTrunc& u, int D) {
  const int need = D + phi.max_order();
  if (u.valid_through() < need) {
    throw ContractError("apply: input series must be valid through degree " +
                        std::to_string(need) + " (has " + std::to_string(u.valid_through()) +
                        ")");
  }
  if (phi.trunc() && *phi.trunc() < D) {
    throw ContractError("apply: operator coefficients only known through degree " +
                        std::to_string(*phi.trunc()));
  }
  if (u.vars().kind() != VarKind::Z || u.vars().n() != phi.n()) {
    throw ContractError("apply: series must be over z with matching n");
  }
  SeriesTrunc sum(SparsePoly(u.vars()), D);
  for (const auto& [alpha, a] : phi.terms()) {
    SeriesTrunc w = u.truncated(need);
    for (int i = 0; i < phi.n(); ++i) {
      for (int k = 0; k < alpha[i]; ++k) w = diff(w, u.vars().z(i));
    }
    sum = sum + mul(SeriesTrunc(a), w, D);
  }
  return sum.truncated(D);
}

DiffOp tau(const DiffOp& phi) {
  const int n = phi.n();
  const VarSet vars = VarSet::of_xi_z(n);
  SparsePoly left(vars);
  for (const auto& [alpha, a] : phi.terms()) {
    Monomial xi;
    for (int i = 0; i < n; ++i) xi.set(vars.xi(i), alpha[i]);
    Rational sign = weight_of(alpha, n) % 2 == 0 ? 1 : -1;
    left += mul(SparsePoly::term(vars, xi, sign), embed(a, vars));
  }
  return normal_order(left, phi.trunc());
}

ExtendedInt nu(const DiffOp& op) { return eta(right_symbol(op)); }

// ---------------------------------------------------------------------------
// Lambda and Phi

SparsePoly lambda(const SparsePoly& f) {
  const VarSet& vars = f.vars();
  if (!vars.has_xi()) throw ContractError("Lambda needs xi variables");
  Accumulator acc;
  acc.reserve(f.size() * static_cast<std::size_t>(vars.n()));
  for (const auto& [m, c] : f.terms()) {
    for (int i = 0; i < vars.n(); ++i) {
      int ex = m[vars.xi(i)];
      int ez = m[vars.z(i)];
      if (ex == 0 || ez == 0) continue;
      Monomial out = m;
      out.set(vars.xi(i), ex - 1);
      out.set(vars.z(i), ez - 1);
      acc[out] += c * (ex * ez);
    }
  }
  return collect(vars, acc);
}

SparsePoly lambda_pow(const SparsePoly& f, int m) {
  if (m < 0) throw ContractError("Lambda power must be non-negative");
  SparsePoly out = f;
  for (int k = 0; k < m && !out.is_zero(); ++k) out = lambda(out);
  return out;
}

SeriesTrunc lambda(const SeriesTrunc& f) {
  SparsePoly p = lambda(f.poly());
  if (f.is_exact()) return SeriesTrunc(std::move(p));
  return SeriesTrunc(std::move(p), std::max(*f.trunc() - 1, -1));
}

SparsePoly phi_apply(const SparsePoly& f, std::optional<int> max_xi, std::optional<int> max_z) {
  if (!f.vars().has_xi()) throw ContractError("Phi needs xi variables");
  SparsePoly sum = f;
  SparsePoly cur = f;
  for (int m = 1; !cur.is_zero(); ++m) {
    cur = lambda(cur);
    cur *= Rational(1, m);
    sum += cur;
  }
  if (max_xi || max_z) return restrict_window(sum, max_xi, max_z);
  return sum;
}

SparsePoly phi_apply(const SeriesTrunc& f, int max_xi, int max_z) {
  if (!f.is_exact()) {
    throw ContractError(
        "phi_apply: refusing a truncated series without an xi/z order profile; "
        "use XiSlicedSeries");
  }
  return phi_apply(f.poly(), max_xi, max_z);
}

XiSlicedSeries::XiSlicedSeries(int n, std::vector<SeriesTrunc> slices)
    : n_(n), slices_(std::move(slices)) {
  const VarSet vars = VarSet::of_xi_z(n);
  for (std::size_t j = 0; j < slices_.size(); ++j) {
    const SparsePoly& p = slices_[j].poly();
    if (!(p.vars() == vars)) throw ContractError("sliced series: slices must live over (xi, z)");
    for (const auto& [m, c] : p.terms()) {
      if (xi_degree(m, vars) != static_cast<int>(j)) {
        throw ContractError("sliced series: slice " + std::to_string(j) +
                            " is not xi-homogeneous");
      }
      if (z_degree(m, vars) < 2 * static_cast<int>(j)) {
        throw ContractError("sliced series: slice " + std::to_string(j) +
                            " violates the z-order >= 2j profile");
      }
    }
  }
}

SparsePoly phi_apply(const XiSlicedSeries& f, int K, int D) {
  if (K < 0 || D < 0) throw ContractError("phi_apply: window bounds must be non-negative");
  if (K > D) throw ContractError("phi_apply: window needs K <= D");
  if (f.xi_max() < D) {
    throw ContractError("phi_apply: need xi slices through degree " + std::to_string(D) +
                        ", have " + std::to_string(f.xi_max()));
  }
  const VarSet vars = VarSet::of_xi_z(f.n());
  SparsePoly out(vars);
  for (int j = 0; j <= D; ++j) {
    const SeriesTrunc& slice = f.slices()[static_cast<std::size_t>(j)];
    if (slice.valid_through() < D + j) {
      throw ContractError("phi_apply: slice " + std::to_string(j) +
                          " must be valid through z-degree " + std::to_string(D + j));
    }
    SparsePoly cur = truncate(slice.poly(), D + j);
    Rational inv_fact = 1;
    for (int m = 0; m <= j && !cur.is_zero(); ++m) {
      if (m > 0) {
        cur = truncate(lambda(cur), D + j - m);
        inv_fact /= m;
      }
      if (j - m <= K) out += truncate(cur, D) * inv_fact;
    }
  }
  return out;
}

CheckResult verify_phi_is_RLinv(const SparsePoly& f) {
  require_xi_z(f, "verify_phi_is_RLinv");
  CheckResult r = check_equal("phi_equals_R_Linv", right_symbol(normal_order(f)), phi_apply(f));
  r.detail = "f = " + to_string(f);
  return r;
}

}  // namespace agcalc
