#include "agcalc/series.hpp"

#include <algorithm>

#include "agcalc/errors.hpp"

namespace agcalc {

namespace {

std::optional<int> as_trunc(long limit) {
  if (limit >= kUnbounded / 2) return std::nullopt;
  return static_cast<int>(std::max(limit, -1L));
}

SeriesTrunc make_series(SparsePoly p, long limit) {
  auto t = as_trunc(limit);
  if (!t) return SeriesTrunc(std::move(p));
  return SeriesTrunc(std::move(p), *t);
}

long order_of(const SparsePoly& p) {
  auto o = order(p);
  return o.is_finite() ? o.value() : kUnbounded;
}

}  // namespace

// ---------------------------------------------------------------------------
// SeriesTrunc

SeriesTrunc::SeriesTrunc(SparsePoly exact) : poly_(std::move(exact)) {}

SeriesTrunc::SeriesTrunc(SparsePoly poly, int trunc)
    : poly_(truncate(poly, trunc)), trunc_(trunc) {
  if (trunc < -1) throw ContractError("truncation order must be >= -1");
}

long SeriesTrunc::valid_through() const { return trunc_ ? *trunc_ : kUnbounded; }

long SeriesTrunc::order_bound() const {
  return std::min(order_of(poly_), trunc_ ? *trunc_ + 1L : kUnbounded);
}

SeriesTrunc SeriesTrunc::truncated(int D) const {
  return SeriesTrunc(poly_, static_cast<int>(std::min<long>(D, valid_through())));
}

SeriesTrunc operator+(const SeriesTrunc& a, const SeriesTrunc& b) {
  return make_series(a.poly() + b.poly(), std::min(a.valid_through(), b.valid_through()));
}

SeriesTrunc operator-(const SeriesTrunc& a, const SeriesTrunc& b) {
  return make_series(a.poly() - b.poly(), std::min(a.valid_through(), b.valid_through()));
}

SeriesTrunc operator-(const SeriesTrunc& a) { return make_series(-a.poly(), a.valid_through()); }

SeriesTrunc operator*(const SeriesTrunc& a, const Rational& c) {
  return make_series(a.poly() * c, a.valid_through());
}

SeriesTrunc mul(const SeriesTrunc& a, const SeriesTrunc& b, std::optional<int> cap) {
  long limit = std::min(a.valid_through() + b.order_bound(), b.valid_through() + a.order_bound());
  if (cap) limit = std::min<long>(limit, *cap);
  auto t = as_trunc(limit);
  return make_series(mul(a.poly(), b.poly(), t), limit);
}

SeriesTrunc pow(const SeriesTrunc& a, unsigned k, std::optional<int> cap) {
  SeriesTrunc result(SparsePoly::constant(a.vars(), 1));
  if (cap) result = result.truncated(*cap);
  SeriesTrunc base = cap ? a.truncated(*cap) : a;
  while (k > 0) {
    if (k & 1U) result = mul(result, base, cap);
    k >>= 1U;
    if (k > 0) base = mul(base, base, cap);
  }
  return result;
}

SeriesTrunc diff(const SeriesTrunc& a, int var) {
  long limit = a.valid_through();
  if (a.vars().is_z(var)) limit -= 1;
  return make_series(diff(a.poly(), var), limit);
}

std::string to_string(const SeriesTrunc& s) {
  std::string out = to_string(s.poly());
  if (s.trunc()) out += " + O(" + std::to_string(*s.trunc() + 1) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// MapTuple

MapTuple::MapTuple(VarSet vars, std::vector<SeriesTrunc> components)
    : vars_(vars), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != vars_.n()) {
    throw ContractError("map tuple needs exactly n components");
  }
  for (const auto& c : components_) {
    if (!(c.vars() == vars_)) throw ContractError("map tuple components must share variables");
  }
}

MapTuple MapTuple::identity(VarSet vars) {
  std::vector<SeriesTrunc> comps;
  for (int i = 0; i < vars.n(); ++i) comps.emplace_back(SparsePoly::variable(vars, vars.z(i)));
  return {vars, std::move(comps)};
}

MapTuple MapTuple::zero(VarSet vars) {
  return {vars, std::vector<SeriesTrunc>(static_cast<std::size_t>(vars.n()),
                                         SeriesTrunc(SparsePoly(vars)))};
}

MapTuple MapTuple::from_polys(VarSet vars, const std::vector<SparsePoly>& polys) {
  std::vector<SeriesTrunc> comps;
  for (const auto& p : polys) comps.emplace_back(p);
  return {vars, std::move(comps)};
}

bool MapTuple::is_exact() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const SeriesTrunc& c) { return c.is_exact(); });
}

long MapTuple::valid_through() const {
  long v = kUnbounded;
  for (const auto& c : components_) v = std::min(v, c.valid_through());
  return v;
}

ExtendedInt MapTuple::order() const {
  ExtendedInt best = ExtendedInt::pos_inf();
  for (const auto& c : components_) best = std::min(best, agcalc::order(c.poly()));
  return best;
}

ExtendedInt MapTuple::degree() const {
  ExtendedInt best = ExtendedInt::neg_inf();
  for (const auto& c : components_) best = std::max(best, agcalc::degree(c.poly()));
  return best;
}

MapTuple MapTuple::truncated(int D) const {
  std::vector<SeriesTrunc> comps;
  for (const auto& c : components_) comps.push_back(c.truncated(D));
  return {vars_, std::move(comps)};
}

namespace {

template <class Op>
MapTuple zip(const MapTuple& a, const MapTuple& b, Op op) {
  if (!(a.vars() == b.vars())) throw ContractError("map tuple variable mismatch");
  std::vector<SeriesTrunc> comps;
  for (int i = 0; i < a.n(); ++i) comps.push_back(op(a[i], b[i]));
  return {a.vars(), std::move(comps)};
}

}  // namespace

MapTuple operator+(const MapTuple& a, const MapTuple& b) {
  return zip(a, b, [](const SeriesTrunc& x, const SeriesTrunc& y) { return x + y; });
}

MapTuple operator-(const MapTuple& a, const MapTuple& b) {
  return zip(a, b, [](const SeriesTrunc& x, const SeriesTrunc& y) { return x - y; });
}

MapTuple scale(const MapTuple& m, const SparsePoly& factor) {
  std::vector<SeriesTrunc> comps;
  for (const auto& c : m.components()) comps.push_back(mul(c, SeriesTrunc(factor)));
  return {m.vars(), std::move(comps)};
}

MapTuple embed(const MapTuple& m, VarSet target) {
  std::vector<SeriesTrunc> comps;
  for (const auto& c : m.components()) {
    SparsePoly p = embed(c.poly(), target);
    comps.push_back(c.trunc() ? SeriesTrunc(p, *c.trunc()) : SeriesTrunc(p));
  }
  return {target, std::move(comps)};
}

std::string to_string(const MapTuple& m, const std::string& name) {
  std::string out;
  for (int i = 0; i < m.n(); ++i) {
    out += name + std::to_string(i + 1) + " = " + to_string(m[i]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composition

SeriesTrunc compose(const SeriesTrunc& u, const MapTuple& g, int D) {
  const VarSet& target = g.vars();
  if (u.vars().n() != g.n()) throw ContractError("compose: arity mismatch");
  const bool u_exact = u.is_exact();
  long min_order_g = kUnbounded;
  for (const auto& gi : g.components()) {
    long o = gi.order_bound();
    if (o == 0 && !u_exact) {
      throw PreconditionError(
          "compose: ill-defined composition, component has a constant term and the outer "
          "series is not a polynomial");
    }
    min_order_g = std::min(min_order_g, o);
  }

  SparsePoly outer = embed(u.poly(), target);
  const int n = g.n();

  // powers[i][k] = g_i^k mod degree > D, built on demand.
  std::vector<std::vector<SeriesTrunc>> powers(static_cast<std::size_t>(n));
  auto power = [&](int i, int k) -> const SeriesTrunc& {
    auto& row = powers[static_cast<std::size_t>(i)];
    if (row.empty()) row.emplace_back(SparsePoly::constant(target, 1));
    while (static_cast<int>(row.size()) <= k) row.push_back(mul(row.back(), g[i], D));
    return row[static_cast<std::size_t>(k)];
  };

  SeriesTrunc sum = SeriesTrunc(SparsePoly(target), D);
  for (const auto& [m, c] : outer.terms()) {
    Monomial rest = m;
    for (int i = 0; i < n; ++i) rest.set(target.z(i), 0);
    SeriesTrunc term(SparsePoly::term(target, rest, c));
    for (int i = 0; i < n; ++i) {
      int e = m[target.z(i)];
      if (e > 0) term = mul(term, power(i, e), D);
    }
    sum = sum + term;
  }

  long limit = std::min<long>(sum.valid_through(), D);
  if (!u_exact) {
    // Missing terms of u start at degree trunc+1 and each substituted
    // variable contributes order >= min_order_g.
    long tail = (static_cast<long>(*u.trunc()) + 1) * min_order_g - 1;
    limit = std::min(limit, tail);
  }
  if (limit < D) {
    throw ContractError("compose: inputs only determine the result through degree " +
                        std::to_string(limit) + ", requested " + std::to_string(D));
  }
  return SeriesTrunc(sum.poly(), D);
}

MapTuple compose(const MapTuple& u, const MapTuple& g, int D) {
  std::vector<SeriesTrunc> comps;
  for (const auto& c : u.components()) comps.push_back(compose(c, g, D));
  return {g.vars(), std::move(comps)};
}

// ---------------------------------------------------------------------------
// Matrices

PolyMatrix::PolyMatrix(int dim, std::vector<SeriesTrunc> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1 || entries_.size() != static_cast<std::size_t>(dim * dim)) {
    throw ContractError("matrix must be square with dim*dim entries");
  }
  for (const auto& e : entries_) {
    if (!(e.vars() == entries_.front().vars())) {
      throw ContractError("matrix entries must share variables");
    }
  }
}

PolyMatrix PolyMatrix::identity(VarSet vars, int dim) {
  std::vector<SeriesTrunc> entries;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      entries.emplace_back(i == j ? SparsePoly::constant(vars, 1) : SparsePoly(vars));
    }
  }
  return {dim, std::move(entries)};
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.dim() != b.dim()) throw ContractError("matrix dimension mismatch");
  std::vector<SeriesTrunc> entries;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    entries.push_back(a.entries()[k] - b.entries()[k]);
  }
  return {a.dim(), std::move(entries)};
}

PolyMatrix scale(const PolyMatrix& m, const SparsePoly& factor) {
  std::vector<SeriesTrunc> entries;
  for (const auto& e : m.entries()) entries.push_back(mul(e, SeriesTrunc(factor)));
  return {m.dim(), std::move(entries)};
}

PolyMatrix jacobian(const MapTuple& h) {
  const int n = h.n();
  std::vector<SeriesTrunc> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) entries.push_back(diff(h[i], h.vars().z(j)));
  }
  return {n, std::move(entries)};
}

namespace {

SeriesTrunc cofactor_rec(const PolyMatrix& m, int row, std::vector<int>& cols,
                         std::optional<int> cap) {
  if (cols.size() == 1) return m.at(row, cols.front());
  SeriesTrunc sum(SparsePoly(m.vars()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const SeriesTrunc& entry = m.at(row, cols[k]);
    if (entry.poly().is_zero() && entry.is_exact()) continue;
    int col = cols[k];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
    SeriesTrunc minor = cofactor_rec(m, row + 1, cols, cap);
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), col);
    SeriesTrunc prod = mul(entry, minor, cap);
    sum = (k % 2 == 0) ? sum + prod : sum - prod;
  }
  return sum;
}

}  // namespace

SeriesTrunc det_cofactor(const PolyMatrix& m, std::optional<int> cap) {
  std::vector<int> cols(static_cast<std::size_t>(m.dim()));
  for (int j = 0; j < m.dim(); ++j) cols[static_cast<std::size_t>(j)] = j;
  SeriesTrunc d = cofactor_rec(m, 0, cols, cap);
  return cap ? d.truncated(*cap) : d;
}

SparsePoly det_bareiss(const PolyMatrix& m) {
  const int n = m.dim();
  std::vector<std::vector<SparsePoly>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!m.at(i, j).is_exact()) throw ContractError("Bareiss elimination needs exact entries");
      a[static_cast<std::size_t>(i)].push_back(m.at(i, j).poly());
    }
  }
  const VarSet vars = m.vars();
  SparsePoly prev = SparsePoly::constant(vars, 1);
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    auto uk = static_cast<std::size_t>(k);
    if (a[uk][uk].is_zero()) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (!a[static_cast<std::size_t>(i)][uk].is_zero()) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return SparsePoly(vars);
      std::swap(a[uk], a[static_cast<std::size_t>(swap)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      for (int j = k + 1; j < n; ++j) {
        auto uj = static_cast<std::size_t>(j);
        SparsePoly num = a[ui][uj] * a[uk][uk] - a[ui][uk] * a[uk][uj];
        a[ui][uj] = divide_exact(num, prev);
      }
      a[ui][uk] = SparsePoly(vars);
    }
    prev = a[uk][uk];
  }
  SparsePoly d = a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
  return sign < 0 ? -d : d;
}

SeriesTrunc det(const PolyMatrix& m, std::optional<int> cap) {
  if (m.dim() <= 4) return det_cofactor(m, cap);
  bool exact = std::all_of(m.entries().begin(), m.entries().end(),
                           [](const SeriesTrunc& e) { return e.is_exact(); });
  if (!exact) return det_cofactor(m, cap);
  SeriesTrunc d(det_bareiss(m));
  return cap ? d.truncated(*cap) : d;
}

}  // namespace agcalc
