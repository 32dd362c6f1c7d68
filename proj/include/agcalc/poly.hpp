#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agcalc/rational.hpp"

namespace agcalc {

// ---------------------------------------------------------------------------
// Variable sets
// ---------------------------------------------------------------------------

enum class VarKind { Z, XiZ, ZT, XiZT };

// Ordered variable set (xi_1..xi_n, z_1..z_n, t) restricted to `kind`.
class VarSet {
 public:
  VarSet(VarKind kind, int n);

  static VarSet of_z(int n) { return {VarKind::Z, n}; }
  static VarSet of_xi_z(int n) { return {VarKind::XiZ, n}; }
  static VarSet of_z_t(int n) { return {VarKind::ZT, n}; }
  static VarSet of_xi_z_t(int n) { return {VarKind::XiZT, n}; }

  VarKind kind() const { return kind_; }
  int n() const { return n_; }
  int size() const;
  bool has_xi() const { return kind_ == VarKind::XiZ || kind_ == VarKind::XiZT; }
  bool has_t() const { return kind_ == VarKind::ZT || kind_ == VarKind::XiZT; }

  // Positions inside a Monomial. i is 0-based. Throw ContractError when the
  // requested variable is not part of this set.
  int xi(int i) const;
  int z(int i) const;
  int t() const;

  bool is_xi(int var) const { return has_xi() && var < n_; }
  bool is_z(int var) const { return var >= z_begin() && var < z_begin() + n_; }
  bool is_t(int var) const { return has_t() && var == size() - 1; }

  int z_begin() const { return has_xi() ? n_ : 0; }

  // Same n, with xi and/or t added or removed.
  VarSet with(bool xi, bool t) const;

  std::string name(int var) const;

  bool operator==(const VarSet&) const = default;

 private:
  VarKind kind_;
  int n_;
};

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

inline constexpr int kMaxVars = 16;

// Exponent vector with fixed capacity. Unused slots stay zero, so
// comparisons and hashing never need the owning VarSet.
class Monomial {
 public:
  Monomial() = default;

  int operator[](int var) const { return exps_[static_cast<std::size_t>(var)]; }
  void set(int var, int e);
  void add(int var, int delta);

  Monomial operator*(const Monomial& other) const;
  // Componentwise this - other; nullopt if some entry would go negative.
  std::optional<Monomial> divide(const Monomial& other) const;
  bool divides(const Monomial& other) const;

  int total() const;
  int total(int begin, int end) const;

  std::size_t hash() const;

  bool operator==(const Monomial&) const = default;

 private:
  std::array<std::uint8_t, kMaxVars> exps_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Canonical term order: total degree ascending, then lexicographically
// descending in variable order (xi block, z block, t). grlex_less is the
// graded lexicographic monomial order used for leading terms.
bool canonical_less(const Monomial& a, const Monomial& b);
bool grlex_less(const Monomial& a, const Monomial& b);

// ---------------------------------------------------------------------------
// Degree sentinels
// ---------------------------------------------------------------------------

// An integer or one of the two infinities. Comparable, never used in
// arithmetic.
class ExtendedInt {
 public:
  static ExtendedInt finite(int v) { return ExtendedInt(Kind::Finite, v); }
  static ExtendedInt pos_inf() { return ExtendedInt(Kind::PosInf, 0); }
  static ExtendedInt neg_inf() { return ExtendedInt(Kind::NegInf, 0); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  int value() const;  // throws ContractError when infinite

  std::strong_ordering operator<=>(const ExtendedInt& o) const;
  bool operator==(const ExtendedInt& o) const = default;

  std::string to_string() const;

 private:
  enum class Kind { NegInf, Finite, PosInf };
  ExtendedInt(Kind k, int v) : kind_(k), value_(v) {}
  Kind kind_;
  int value_;
};

// ---------------------------------------------------------------------------
// Sparse polynomials
// ---------------------------------------------------------------------------

class SparsePoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  explicit SparsePoly(VarSet vars) : vars_(vars) {}

  static SparsePoly constant(VarSet vars, const Rational& c);
  static SparsePoly variable(VarSet vars, int var);
  static SparsePoly term(VarSet vars, const Monomial& m, const Rational& c);
  // Merges duplicates, drops zeros and sorts.
  static SparsePoly from_terms(VarSet vars, std::vector<Term> terms);

  const VarSet& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const Monomial& m) const;

  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly& operator*=(const Rational& c);

  bool operator==(const SparsePoly& o) const;

 private:
  VarSet vars_;
  std::vector<Term> terms_;
};

SparsePoly operator+(SparsePoly a, const SparsePoly& b);
SparsePoly operator-(SparsePoly a, const SparsePoly& b);
SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
SparsePoly operator*(SparsePoly a, const Rational& c);
SparsePoly operator*(const Rational& c, SparsePoly a);

SparsePoly add(const SparsePoly& p, const SparsePoly& q);
// Product; with `trunc`, terms of z-degree > trunc are never formed.
SparsePoly mul(const SparsePoly& p, const SparsePoly& q,
               std::optional<int> trunc = std::nullopt);
SparsePoly pow(const SparsePoly& p, unsigned k, std::optional<int> trunc = std::nullopt);
SparsePoly diff(const SparsePoly& p, int var);

// Keep only terms whose z-degree is <= max_z_degree.
SparsePoly truncate(const SparsePoly& p, int max_z_degree);
// Keep terms whose monomial satisfies the predicate-like window bounds.
SparsePoly restrict_window(const SparsePoly& p, std::optional<int> max_xi_degree,
                           std::optional<int> max_z_degree,
                           std::optional<int> max_t_degree = std::nullopt);
// Terms of xi-degree exactly k.
SparsePoly xi_slice(const SparsePoly& p, int k);
// Terms of t-degree exactly k, returned with t removed (same VarSet).
SparsePoly t_coefficient(const SparsePoly& p, int k);

// Exact quotient p / m for a monomial m dividing every term.
SparsePoly divide_by_monomial(const SparsePoly& p, const Monomial& m);
// Exact multivariate division; throws ContractError when q does not divide p.
SparsePoly divide_exact(const SparsePoly& p, const SparsePoly& q);

// Re-express p over `target`, matching variables by role (xi_i, z_i, t).
// Throws ContractError if p uses a variable absent from target.
SparsePoly embed(const SparsePoly& p, VarSet target);

// Exact substitution z_i -> g[i]. The g share one VarSet which also receives
// u's xi and t variables.
SparsePoly substitute_z(const SparsePoly& u, const std::vector<SparsePoly>& g);

// Evaluate t -> value (a rational). Result keeps the VarSet.
SparsePoly substitute_t(const SparsePoly& p, const Rational& value);

int z_degree(const Monomial& m, const VarSet& vars);
int xi_degree(const Monomial& m, const VarSet& vars);
int t_degree(const Monomial& m, const VarSet& vars);

// Min / max z-total-degree; +inf / -inf for the zero polynomial.
ExtendedInt order(const SparsePoly& p);
ExtendedInt degree(const SparsePoly& p);
ExtendedInt xi_degree(const SparsePoly& p);
ExtendedInt t_degree(const SparsePoly& p);
// min(|beta| - |alpha|) over terms xi^alpha z^beta; requires xi variables.
ExtendedInt eta(const SparsePoly& p);

std::string to_string(const Monomial& m, const VarSet& vars);
std::string to_string(const SparsePoly& p);

// Grammar: sums of products of rational literals and variables z<i>, xi<i>, t
// with optional ^<int>. Example: "1/2*z1^2 - 3*xi1*z2 + t".
SparsePoly parse_poly(std::string_view text, VarSet vars);

}  // namespace agcalc
