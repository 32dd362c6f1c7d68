// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "agcalc/corpus.hpp"
#include "agcalc/inversion.hpp"
#include "agcalc/jacobian_lab.hpp"
#include "agcalc/weyl.hpp"

using namespace agcalc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

bool same_polys(const MapTuple& a, const MapTuple& b) {
  if (a.n() != b.n()) return false;
  for (int i = 0; i < a.n(); ++i)
    if (!(a[i].poly() == b[i].poly())) return false;
  return true;
}

Outcome fail(const std::string& why) { return {false, why}; }

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = default_corpus(1);
  return c;
}

constexpr int kD = 8;

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  int n_seen[4] = {0, 0, 0, 0};
  for (const CorpusEntry& e : corpus()) {
    ++n_seen[e.H.n()];
    const MapTuple G0 = invert_fixed_point(e.H, kD).G;
    if (!same_polys(invert_ag(e.H, kD).G, G0)) return fail(e.id + ": ag differs");
    if (!same_polys(invert_lambda(e.H, kD).G, G0)) return fail(e.id + ": lambda differs");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (corpus().size() < 20) return fail("corpus too small");
  if (!n_seen[1] || !n_seen[2] || !n_seen[3]) return fail("missing a dimension");
  if (secs >= 120) return fail("took " + std::to_string(secs) + "s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu maps (n=1:%d n=2:%d n=3:%d), D=8, %.2fs", corpus().size(),
                n_seen[1], n_seen[2], n_seen[3], secs);
  return {true, buf};
}

Outcome criterion2() {
  for (const CorpusEntry& e : corpus()) {
    const InversionResult r = invert_lambda(e.H, kD);
    for (const CheckResult& c : round_trip_checks(e.H, r.G, kD))
      if (!c.pass) return fail(e.id + ": " + c.name);
  }
  return {true, std::to_string(corpus().size()) + " maps, F(G) and G(F) exact mod degree > 8"};
}

Outcome criterion3() {
  const VarSet z = VarSet::of_z(1);
  const MapTuple H = MapTuple::from_polys(z, {parse_poly("z^2", z)});
  const long expect[] = {1, 1, 2, 5, 14, 42};
  for (const InversionResult& r : {invert_fixed_point(H, 6), invert_ag(H, 6), invert_lambda(H, 6)}) {
    Monomial m;
    for (int k = 1; k <= 6; ++k) {
      m.set(0, k);
      if (r.G[0].poly().coeff(m) != expect[k - 1])
        return fail(to_string(r.method) + " degree " + std::to_string(k));
    }
  }
  return {true, "1, 1, 2, 5, 14, 42 by all three methods"};
}

int monomial_sweep(int n, int max_a, int max_b, std::string& bad) {
  const VarSet v = VarSet::of_xi_z(n);
  int count = 0;
  for (int ka = 0; ka <= max_a; ++ka)
    for (const MultiIndex& a : multi_indices_of_weight(n, ka))
      for (int kb = 0; kb <= max_b; ++kb)
        for (const MultiIndex& b : multi_indices_of_weight(n, kb)) {
          Monomial m;
          for (int i = 0; i < n; ++i) {
            m.set(v.xi(i), a[static_cast<std::size_t>(i)]);
            m.set(v.z(i), b[static_cast<std::size_t>(i)]);
          }
          const SparsePoly f = SparsePoly::term(v, m, 1);
          if (!verify_phi_is_RLinv(f).pass && bad.empty()) bad = to_string(f);
          ++count;
        }
  return count;
}

Outcome criterion4() {
  std::string bad;
  const int c2 = monomial_sweep(2, 3, 4, bad);
  const int c3 = monomial_sweep(3, 2, 3, bad);
  if (!bad.empty()) return fail("mismatch at " + bad);
  return {true, std::to_string(c2) + " monomials at n=2, " + std::to_string(c3) + " at n=3"};
}

DiffOp random_op(std::mt19937_64& gen, int n) {
  auto range = [&](int lo, int hi) { return lo + static_cast<int>(gen() % static_cast<unsigned>(hi - lo + 1)); };
  const VarSet z = VarSet::of_z(n);
  DiffOp op(n);
  const int terms = range(1, 3);
  for (int k = 0; k < terms; ++k) {
    Monomial alpha;
    const int w = range(0, 3);
    for (int e = 0; e < w; ++e) alpha.add(range(0, n - 1), 1);
    Monomial beta;
    const int d = range(0, 3);
    for (int e = 0; e < d; ++e) beta.add(z.z(range(0, n - 1)), 1);
    op.add_term(alpha, SparsePoly::term(z, beta, Rational(range(-4, 4) | 1)));
  }
  return op;
}

Outcome criterion5() {
  std::mt19937_64 gen(5);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + it % 3;
    const DiffOp phi = random_op(gen, n);
    const DiffOp psi = random_op(gen, n);
    if (!(tau(tau(phi)) == phi)) return fail("tau^2 at pair " + std::to_string(it));
    if (!(tau(op_mul(phi, psi)) == op_mul(tau(psi), tau(phi))))
      return fail("anti-multiplicativity at pair " + std::to_string(it));
  }
  return {true, "200 random pairs, |alpha| <= 3, coefficient degree <= 3"};
}

Outcome criterion6() {
  std::vector<const CorpusEntry*> picked;
  int non_unit = 0;
  for (const CorpusEntry& e : corpus()) {
    if (picked.size() == 10) break;
    const bool jf_one = jacobian_of_f(e.H, 6).poly() == SparsePoly::constant(e.H.vars(), 1);
    if (jf_one && static_cast<int>(picked.size()) - non_unit >= 6) continue;
    picked.push_back(&e);
    non_unit += !jf_one;
  }
  if (picked.size() < 10 || non_unit < 3) return fail("could not pick 10 maps with 3 of JF != 1");
  int windows = 0;
  for (const CorpusEntry* e : picked) {
    const SeriesTrunc q(SparsePoly::constant(e->H.vars(), 1));
    for (int D = 0; D <= 6; ++D)
      for (int K = 0; K <= std::min(3, D); ++K) {
        const CheckResult r = verify_phi_identity(e->H, q, K, D);
        if (!r.pass) return fail(e->id + " K=" + std::to_string(K) + " D=" + std::to_string(D));
        ++windows;
      }
  }
  return {true, "10 maps (" + std::to_string(non_unit) + " with JF != 1), " +
                    std::to_string(windows) + " windows K <= 3, D <= 6"};
}

Outcome criterion7() {
  int nil = 0, ctl = 0;
  for (const CorpusEntry& e : corpus()) {
    if (!e.H.is_exact() || !e.expected_nilpotent) continue;
    const NilpotencyResult r = is_nilpotent(e.H);
    const VanishingReport s = vanishing_scan(e.H, 0, 6);
    if (*e.expected_nilpotent) {
      if (!r.nilpotent) return fail(e.id + ": det != 1");
      if (s.first_nonzero) return fail(e.id + ": nonzero at m=" + std::to_string(*s.first_nonzero));
      ++nil;
    } else {
      if (r.nilpotent) return fail(e.id + ": control has det = 1");
      if (!s.first_nonzero || *s.first_nonzero > e.H.n())
        return fail(e.id + ": no witness within m <= n");
      ++ctl;
    }
  }
  if (nil == 0 || ctl == 0) return fail("corpus lacks nilpotent or control instances");
  return {true, std::to_string(nil) + " nilpotent, " + std::to_string(ctl) + " controls"};
}

Outcome criterion8() {
  int gt = 0, nt = 0, stab = 0;
  for (const CorpusEntry& e : corpus()) {
    if (!e.H.is_exact()) continue;
    if (gt < 10) {
      if (!jacobian_Gt_series(e.H, 4).oracle.pass) return fail(e.id + ": JG_t series");
      ++gt;
    }
    if (e.family == Family::Triangular && e.expected_nilpotent.value_or(false)) {
      if (!Nt_series(e.H, 6).oracle.pass) return fail(e.id + ": N_t series");
      ++nt;
    }
    if (e.known_inverse_t_degree) {
      const int d = *e.known_inverse_t_degree;
      const VanishingReport s = vanishing_scan(e.H, 1, d + 2);
      if (s.last_nonzero.value_or(-1) != d)
        return fail(e.id + ": stabilization index " + std::to_string(s.last_nonzero.value_or(-1)) +
                    " vs t-degree " + std::to_string(d));
      ++stab;
    }
  }
  if (gt < 10 || nt == 0 || stab == 0) return fail("too few instances");
  return {true, std::to_string(gt) + " JG_t oracles, " + std::to_string(nt) + " N_t oracles, " +
                    std::to_string(stab) + " stabilization indices"};
}

Outcome criterion9() {
  CutoffAudit audit;
  for (const CorpusEntry& e : corpus()) {
    invert_ag(e.H, kD, &audit);
    invert_lambda(e.H, kD, &audit);
    const SeriesTrunc one(SparsePoly::constant(e.H.vars(), 1));
    ag_apply(one, e.H, kD, &audit);
    q_compose_G(one, e.H, kD, &audit);
    for (int k = 1; k <= 2; ++k) xi_moment_series(e.H, one, k, kD, &audit);
  }
  if (audit.violations != 0) return fail(audit.messages.front());
  return {true, std::to_string(audit.checks) + " cutoffs checked, 0 violations"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6,
                                                          criterion7, criterion8, criterion9};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s (%s) [%.2fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                secs);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
