#include "agcalc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <unordered_map>

#include "agcalc/errors.hpp"

namespace agcalc {

// ---------------------------------------------------------------------------
// VarSet

VarSet::VarSet(VarKind kind, int n) : kind_(kind), n_(n) {
  if (n < 1) throw ContractError("variable count must be positive");
  if (size() > kMaxVars) {
    throw ContractError("too many variables: " + std::to_string(size()) + " > " +
                        std::to_string(kMaxVars));
  }
}

int VarSet::size() const {
  switch (kind_) {
    case VarKind::Z: return n_;
    case VarKind::XiZ: return 2 * n_;
    case VarKind::ZT: return n_ + 1;
    case VarKind::XiZT: return 2 * n_ + 1;
  }
  return 0;
}

int VarSet::xi(int i) const {
  if (!has_xi() || i < 0 || i >= n_) throw ContractError("xi index out of range");
  return i;
}

int VarSet::z(int i) const {
  if (i < 0 || i >= n_) throw ContractError("z index out of range");
  return z_begin() + i;
}

int VarSet::t() const {
  if (!has_t()) throw ContractError("variable set has no t");
  return size() - 1;
}

VarSet VarSet::with(bool xi, bool t) const {
  VarKind k = xi ? (t ? VarKind::XiZT : VarKind::XiZ) : (t ? VarKind::ZT : VarKind::Z);
  return {k, n_};
}

std::string VarSet::name(int var) const {
  if (var < 0 || var >= size()) throw ContractError("variable index out of range");
  if (is_xi(var)) return "xi" + std::to_string(var + 1);
  if (is_z(var)) return "z" + std::to_string(var - z_begin() + 1);
  return "t";
}

// ---------------------------------------------------------------------------
// Monomial

void Monomial::set(int var, int e) {
  if (var < 0 || var >= kMaxVars) throw ContractError("variable index out of range");
  if (e < 0 || e > 255) throw ContractError("exponent out of range: " + std::to_string(e));
  exps_[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
}

void Monomial::add(int var, int delta) { set(var, (*this)[var] + delta); }

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    int e = exps_[i] + other.exps_[i];
    if (e > 255) throw ContractError("exponent overflow in monomial product");
    out.exps_[i] = static_cast<std::uint8_t>(e);
  }
  return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  Monomial out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] < other.exps_[i]) return std::nullopt;
    out.exps_[i] = static_cast<std::uint8_t>(exps_[i] - other.exps_[i]);
  }
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

int Monomial::total() const { return total(0, kMaxVars); }

int Monomial::total(int begin, int end) const {
  int s = 0;
  for (int i = begin; i < end; ++i) s += exps_[static_cast<std::size_t>(i)];
  return s;
}

std::size_t Monomial::hash() const {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::memcpy(&lo, exps_.data(), 8);
  std::memcpy(&hi, exps_.data() + 8, 8);
  std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL;
  h ^= (hi + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)) * 0xC2B2AE3D27D4EB4FULL;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

bool canonical_less(const Monomial& a, const Monomial& b) {
  int ta = a.total();
  int tb = b.total();
  if (ta != tb) return ta < tb;
  for (int v = 0; v < kMaxVars; ++v) {
    if (a[v] != b[v]) return a[v] > b[v];
  }
  return false;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  int ta = a.total();
  int tb = b.total();
  if (ta != tb) return ta < tb;
  for (int v = 0; v < kMaxVars; ++v) {
    if (a[v] != b[v]) return a[v] < b[v];
  }
  return false;
}

// ---------------------------------------------------------------------------
// ExtendedInt

int ExtendedInt::value() const {
  if (kind_ != Kind::Finite) throw ContractError("infinite degree sentinel has no value");
  return value_;
}

std::strong_ordering ExtendedInt::operator<=>(const ExtendedInt& o) const {
  if (kind_ != o.kind_) return static_cast<int>(kind_) <=> static_cast<int>(o.kind_);
  if (kind_ != Kind::Finite) return std::strong_ordering::equal;
  return value_ <=> o.value_;
}

std::string ExtendedInt::to_string() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    case Kind::Finite: break;
  }
  return std::to_string(value_);
}

// ---------------------------------------------------------------------------
// SparsePoly

namespace {

void require_same_vars(const SparsePoly& a, const SparsePoly& b) {
  if (!(a.vars() == b.vars())) throw ContractError("variable set mismatch");
}

bool term_less(const SparsePoly::Term& a, const SparsePoly::Term& b) {
  return canonical_less(a.first, b.first);
}

using Accumulator = std::unordered_map<Monomial, Rational, MonomialHash>;

SparsePoly from_accumulator(VarSet vars, Accumulator& acc) {
  std::vector<SparsePoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.emplace_back(m, std::move(c));
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

}  // namespace

SparsePoly SparsePoly::constant(VarSet vars, const Rational& c) {
  return term(vars, Monomial{}, c);
}

SparsePoly SparsePoly::variable(VarSet vars, int var) {
  if (var < 0 || var >= vars.size()) throw ContractError("variable index out of range");
  Monomial m;
  m.set(var, 1);
  return term(vars, m, 1);
}

SparsePoly SparsePoly::term(VarSet vars, const Monomial& m, const Rational& c) {
  SparsePoly p(vars);
  for (int v = vars.size(); v < kMaxVars; ++v) {
    if (m[v] != 0) throw ContractError("monomial uses a variable outside the set");
  }
  if (c != 0) p.terms_.emplace_back(m, c);
  return p;
}

SparsePoly SparsePoly::from_terms(VarSet vars, std::vector<Term> terms) {
  SparsePoly p(vars);
  std::stable_sort(terms.begin(), terms.end(), term_less);
  for (auto& t : terms) {
    for (int v = vars.size(); v < kMaxVars; ++v) {
      if (t.first[v] != 0) throw ContractError("monomial uses a variable outside the set");
    }
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Rational SparsePoly::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) {
                               return canonical_less(t.first, key);
                             });
  if (it != terms_.end() && it->first == m) return it->second;
  return 0;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  require_same_vars(*this, o);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && canonical_less(a->first, b->first))) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || canonical_less(b->first, a->first)) {
      merged.push_back(*b++);
    } else {
      Rational s = a->second + b->second;
      if (s != 0) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) { return *this += -o; }

SparsePoly& SparsePoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

bool SparsePoly::operator==(const SparsePoly& o) const {
  return vars_ == o.vars_ && terms_ == o.terms_;
}

SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) { return mul(a, b); }
SparsePoly operator*(SparsePoly a, const Rational& c) { return a *= c; }
SparsePoly operator*(const Rational& c, SparsePoly a) { return a *= c; }

SparsePoly add(const SparsePoly& p, const SparsePoly& q) { return p + q; }

SparsePoly mul(const SparsePoly& p, const SparsePoly& q, std::optional<int> trunc) {
  require_same_vars(p, q);
  const VarSet& vars = p.vars();
  if (p.is_zero() || q.is_zero()) return SparsePoly(vars);

  // Sort q by z-degree so the inner loop can stop at the truncation bound.
  std::vector<std::pair<int, const SparsePoly::Term*>> qs;
  qs.reserve(q.size());
  for (const auto& t : q.terms()) qs.emplace_back(z_degree(t.first, vars), &t);
  std::stable_sort(qs.begin(), qs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  Accumulator acc;
  acc.reserve(std::min<std::size_t>(p.size() * q.size(), 1u << 20));
  Rational prod;
  for (const auto& [pm, pc] : p.terms()) {
    int pd = z_degree(pm, vars);
    for (const auto& [qd, qt] : qs) {
      if (trunc && pd + qd > *trunc) break;
      prod = pc * qt->second;
      acc[pm * qt->first] += prod;
    }
  }
  return from_accumulator(vars, acc);
}

SparsePoly pow(const SparsePoly& p, unsigned k, std::optional<int> trunc) {
  SparsePoly result = SparsePoly::constant(p.vars(), 1);
  SparsePoly base = p;
  if (trunc) {
    result = truncate(result, *trunc);
    base = truncate(base, *trunc);
  }
  while (k > 0) {
    if (k & 1U) result = mul(result, base, trunc);
    k >>= 1U;
    if (k > 0) base = mul(base, base, trunc);
  }
  return result;
}

SparsePoly diff(const SparsePoly& p, int var) {
  if (var < 0 || var >= p.vars().size()) throw ContractError("variable index out of range");
  std::vector<SparsePoly::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    int e = m[var];
    if (e == 0) continue;
    Monomial dm = m;
    dm.set(var, e - 1);
    terms.emplace_back(dm, c * e);
  }
  return SparsePoly::from_terms(p.vars(), std::move(terms));
}

SparsePoly truncate(const SparsePoly& p, int max_z_degree) {
  return restrict_window(p, std::nullopt, max_z_degree);
}

SparsePoly restrict_window(const SparsePoly& p, std::optional<int> max_xi_degree,
                           std::optional<int> max_z_degree, std::optional<int> max_t_degree) {
  std::vector<SparsePoly::Term> terms;
  const VarSet& vars = p.vars();
  for (const auto& t : p.terms()) {
    if (max_xi_degree && xi_degree(t.first, vars) > *max_xi_degree) continue;
    if (max_z_degree && z_degree(t.first, vars) > *max_z_degree) continue;
    if (max_t_degree && t_degree(t.first, vars) > *max_t_degree) continue;
    terms.push_back(t);
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

SparsePoly xi_slice(const SparsePoly& p, int k) {
  std::vector<SparsePoly::Term> terms;
  for (const auto& t : p.terms()) {
    if (xi_degree(t.first, p.vars()) == k) terms.push_back(t);
  }
  return SparsePoly::from_terms(p.vars(), std::move(terms));
}

SparsePoly t_coefficient(const SparsePoly& p, int k) {
  const VarSet& vars = p.vars();
  if (!vars.has_t()) return k == 0 ? p : SparsePoly(vars);
  std::vector<SparsePoly::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    if (m[vars.t()] != k) continue;
    Monomial stripped = m;
    stripped.set(vars.t(), 0);
    terms.emplace_back(stripped, c);
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

SparsePoly divide_by_monomial(const SparsePoly& p, const Monomial& m) {
  std::vector<SparsePoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& [pm, c] : p.terms()) {
    auto q = pm.divide(m);
    if (!q) throw ContractError("monomial does not divide " + to_string(pm, p.vars()));
    terms.emplace_back(*q, c);
  }
  return SparsePoly::from_terms(p.vars(), std::move(terms));
}

namespace {

const SparsePoly::Term& leading_term(const SparsePoly& p) {
  const SparsePoly::Term* best = &p.terms().front();
  for (const auto& t : p.terms()) {
    if (grlex_less(best->first, t.first)) best = &t;
  }
  return *best;
}

}  // namespace

SparsePoly divide_exact(const SparsePoly& p, const SparsePoly& q) {
  require_same_vars(p, q);
  if (q.is_zero()) throw ContractError("division by the zero polynomial");
  const auto lq = leading_term(q);
  SparsePoly rem = p;
  std::vector<SparsePoly::Term> quotient;
  while (!rem.is_zero()) {
    const auto& lr = leading_term(rem);
    auto m = lr.first.divide(lq.first);
    if (!m) throw ContractError("polynomial division is not exact");
    Rational c = lr.second / lq.second;
    quotient.emplace_back(*m, c);
    rem -= mul(SparsePoly::term(p.vars(), *m, c), q);
  }
  return SparsePoly::from_terms(p.vars(), std::move(quotient));
}

SparsePoly embed(const SparsePoly& p, VarSet target) {
  const VarSet& src = p.vars();
  if (src.n() != target.n()) throw ContractError("embedding requires equal n");
  if (src == target) return p;
  std::vector<int> map(static_cast<std::size_t>(src.size()), -1);
  for (int v = 0; v < src.size(); ++v) {
    if (src.is_xi(v) && target.has_xi()) map[v] = target.xi(v);
    if (src.is_z(v)) map[v] = target.z(v - src.z_begin());
    if (src.is_t(v) && target.has_t()) map[v] = target.t();
  }
  std::vector<SparsePoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial out;
    for (int v = 0; v < src.size(); ++v) {
      if (m[v] == 0) continue;
      if (map[v] < 0) {
        throw ContractError("cannot embed: variable " + src.name(v) + " missing in target");
      }
      out.set(map[v], m[v]);
    }
    terms.emplace_back(out, c);
  }
  return SparsePoly::from_terms(target, std::move(terms));
}

SparsePoly substitute_z(const SparsePoly& u, const std::vector<SparsePoly>& g) {
  const VarSet& src = u.vars();
  if (static_cast<int>(g.size()) != src.n() || g.empty()) {
    throw ContractError("substitution needs one polynomial per z variable");
  }
  const VarSet target = g.front().vars();
  for (const auto& gi : g) {
    if (!(gi.vars() == target)) throw ContractError("substituted polynomials must share variables");
  }
  std::vector<std::vector<SparsePoly>> powers(g.size());
  SparsePoly out(target);
  for (const auto& [m, c] : u.terms()) {
    Monomial rest = m;
    SparsePoly term = SparsePoly::constant(target, c);
    for (int i = 0; i < src.n(); ++i) {
      const int e = m[src.z(i)];
      rest.set(src.z(i), 0);
      auto& row = powers[static_cast<std::size_t>(i)];
      if (row.empty()) row.push_back(SparsePoly::constant(target, 1));
      while (static_cast<int>(row.size()) <= e) row.push_back(mul(row.back(), g[static_cast<std::size_t>(i)]));
      if (e > 0) term = mul(term, row[static_cast<std::size_t>(e)]);
    }
    out += mul(term, embed(SparsePoly::term(src, rest, 1), target));
  }
  return out;
}

SparsePoly substitute_t(const SparsePoly& p, const Rational& value) {
  const VarSet& vars = p.vars();
  if (!vars.has_t()) return p;
  std::vector<SparsePoly::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    Monomial stripped = m;
    stripped.set(vars.t(), 0);
    Rational f = 1;
    for (int i = 0; i < m[vars.t()]; ++i) f *= value;
    terms.emplace_back(stripped, c * f);
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

int z_degree(const Monomial& m, const VarSet& vars) {
  return m.total(vars.z_begin(), vars.z_begin() + vars.n());
}

int xi_degree(const Monomial& m, const VarSet& vars) {
  return vars.has_xi() ? m.total(0, vars.n()) : 0;
}

int t_degree(const Monomial& m, const VarSet& vars) {
  return vars.has_t() ? m[vars.t()] : 0;
}

namespace {

template <class F>
ExtendedInt extreme(const SparsePoly& p, F&& key, bool want_min) {
  if (p.is_zero()) return want_min ? ExtendedInt::pos_inf() : ExtendedInt::neg_inf();
  int best = key(p.terms().front().first);
  for (const auto& t : p.terms()) {
    int k = key(t.first);
    best = want_min ? std::min(best, k) : std::max(best, k);
  }
  return ExtendedInt::finite(best);
}

}  // namespace

ExtendedInt order(const SparsePoly& p) {
  return extreme(p, [&](const Monomial& m) { return z_degree(m, p.vars()); }, true);
}

ExtendedInt degree(const SparsePoly& p) {
  return extreme(p, [&](const Monomial& m) { return z_degree(m, p.vars()); }, false);
}

ExtendedInt xi_degree(const SparsePoly& p) {
  return extreme(p, [&](const Monomial& m) { return xi_degree(m, p.vars()); }, false);
}

ExtendedInt t_degree(const SparsePoly& p) {
  return extreme(p, [&](const Monomial& m) { return t_degree(m, p.vars()); }, false);
}

ExtendedInt eta(const SparsePoly& p) {
  if (!p.vars().has_xi()) throw ContractError("eta grading needs xi variables");
  return extreme(
      p,
      [&](const Monomial& m) { return z_degree(m, p.vars()) - xi_degree(m, p.vars()); },
      true);
}

// ---------------------------------------------------------------------------
// Rendering and parsing

std::string to_string(const Monomial& m, const VarSet& vars) {
  std::string out;
  for (int v = 0; v < vars.size(); ++v) {
    if (m[v] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.name(v);
    if (m[v] > 1) out += '^' + std::to_string(m[v]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const SparsePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    std::string term;
    bool constant = m.total() == 0;
    if (constant) {
      term = to_string(c);
    } else if (c == 1) {
      term = to_string(m, p.vars());
    } else if (c == -1) {
      term = "-" + to_string(m, p.vars());
    } else {
      term = to_string(c) + "*" + to_string(m, p.vars());
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

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, VarSet vars) : text_(text), vars_(vars) {}

  SparsePoly parse() {
    SparsePoly sum(vars_);
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      SparsePoly t = parse_term();
      if (sign < 0) t = -t;
      sum += t;
      first = false;
      skip_ws();
    }
    return sum;
  }

 private:
  SparsePoly parse_term() {
    Rational coeff = 1;
    Monomial mono;
    while (true) {
      skip_ws();
      if (at_end()) fail("unexpected end of input");
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        int var = parse_variable();
        int e = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          ++pos_;
          skip_ws();
          e = parse_uint();
        }
        mono.add(var, e);
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return SparsePoly::term(vars_, mono, coeff);
  }

  Rational parse_number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (!at_end() && peek() == '/') {
      ++pos_;
      std::size_t den = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (den == pos_) fail("missing denominator");
    }
    return parse_rational(text_.substr(start, pos_ - start));
  }

  int parse_uint() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  int parse_variable() {
    std::size_t start = pos_;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    int index = 1;
    bool has_index = !at_end() && std::isdigit(static_cast<unsigned char>(peek()));
    if (has_index) index = parse_uint();
    if (name == "t" && !has_index) {
      if (!vars_.has_t()) fail("variable t not available");
      return vars_.t();
    }
    if (!has_index && vars_.n() != 1) fail("variable '" + std::string(name) + "' needs an index");
    if (index < 1 || index > vars_.n()) fail("variable index out of range");
    if (name == "z") return vars_.z(index - 1);
    if (name == "xi") {
      if (!vars_.has_xi()) fail("xi variables not available");
      return vars_.xi(index - 1);
    }
    fail("unknown variable '" + std::string(name) + "'");
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial literal: " + msg + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  VarSet vars_;
  std::size_t pos_ = 0;
};

}  // namespace

SparsePoly parse_poly(std::string_view text, VarSet vars) {
  try {
    return PolyParser(text, vars).parse();
  } catch (const ContractError& e) {
    throw ParseError(std::string("polynomial literal: ") + e.what());
  }
}

}  // namespace agcalc
