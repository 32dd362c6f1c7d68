#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agcalc/poly.hpp"

namespace agcalc {

// A power series known modulo terms of z-degree > trunc, or an exact
// polynomial (no trunc). Terms above trunc are never stored.
//
// Arithmetic tracks validity: a product a*b is known through
// min(trunc_a + ord_b, trunc_b + ord_a), a derivative in z loses one degree.
// Callers ask for an output window and the tracked bound tells whether the
// inputs were deep enough.
class SeriesTrunc {
 public:
  explicit SeriesTrunc(SparsePoly exact);
  SeriesTrunc(SparsePoly poly, int trunc);

  const SparsePoly& poly() const { return poly_; }
  const VarSet& vars() const { return poly_.vars(); }
  bool is_exact() const { return !trunc_.has_value(); }
  std::optional<int> trunc() const { return trunc_; }

  // Largest D such that the stored terms are the true series mod degree > D.
  long valid_through() const;
  // Lower bound for the order of the true series (stored order, capped by
  // trunc + 1 since unknown terms start there).
  long order_bound() const;

  SeriesTrunc truncated(int D) const;

  bool operator==(const SeriesTrunc&) const = default;

 private:
  SparsePoly poly_;
  std::optional<int> trunc_;
};

inline constexpr long kUnbounded = 1L << 40;

SeriesTrunc operator+(const SeriesTrunc& a, const SeriesTrunc& b);
SeriesTrunc operator-(const SeriesTrunc& a, const SeriesTrunc& b);
SeriesTrunc operator-(const SeriesTrunc& a);
SeriesTrunc operator*(const SeriesTrunc& a, const Rational& c);
SeriesTrunc mul(const SeriesTrunc& a, const SeriesTrunc& b, std::optional<int> cap = std::nullopt);
SeriesTrunc pow(const SeriesTrunc& a, unsigned k, std::optional<int> cap = std::nullopt);
SeriesTrunc diff(const SeriesTrunc& a, int var);

std::string to_string(const SeriesTrunc& s);

// n-tuple of series over a shared VarSet: H, N, F = z - H, G = z + N.
class MapTuple {
 public:
  MapTuple(VarSet vars, std::vector<SeriesTrunc> components);

  static MapTuple identity(VarSet vars);
  static MapTuple zero(VarSet vars);
  static MapTuple from_polys(VarSet vars, const std::vector<SparsePoly>& polys);

  const VarSet& vars() const { return vars_; }
  int n() const { return vars_.n(); }
  const std::vector<SeriesTrunc>& components() const { return components_; }
  const SeriesTrunc& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }

  bool is_exact() const;
  long valid_through() const;
  // min over components of the z-order, +inf when all vanish.
  ExtendedInt order() const;
  ExtendedInt degree() const;

  MapTuple truncated(int D) const;

  bool operator==(const MapTuple&) const = default;

 private:
  VarSet vars_;
  std::vector<SeriesTrunc> components_;
};

MapTuple operator+(const MapTuple& a, const MapTuple& b);
MapTuple operator-(const MapTuple& a, const MapTuple& b);
// Multiply every component by a polynomial (e.g. t).
MapTuple scale(const MapTuple& m, const SparsePoly& factor);
// Re-express components over another VarSet with the same n.
MapTuple embed(const MapTuple& m, VarSet target);

std::string to_string(const MapTuple& m, const std::string& name = "G");

// u(g_1, ..., g_n) mod z-degree > D. u lives over Z(n) or over g's VarSet;
// its z-variables are substituted, any xi/t variables are kept.
// Requires zero constant terms in g unless u is an exact polynomial, and
// enough depth in u and g to be valid through D.
SeriesTrunc compose(const SeriesTrunc& u, const MapTuple& g, int D);
MapTuple compose(const MapTuple& u, const MapTuple& g, int D);

// Square matrix of series sharing a VarSet.
class PolyMatrix {
 public:
  PolyMatrix(int dim, std::vector<SeriesTrunc> entries);

  static PolyMatrix identity(VarSet vars, int dim);

  int dim() const { return dim_; }
  const VarSet& vars() const { return entries_.front().vars(); }
  const SeriesTrunc& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * dim_ + j)];
  }
  const std::vector<SeriesTrunc>& entries() const { return entries_; }

 private:
  int dim_;
  std::vector<SeriesTrunc> entries_;
};

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix scale(const PolyMatrix& m, const SparsePoly& factor);

// Entry (i, j) = d h_i / d z_j.
PolyMatrix jacobian(const MapTuple& h);

// Cofactor expansion for dim <= 4, fraction-free elimination above (exact
// entries only; truncated entries always use cofactors).
SeriesTrunc det(const PolyMatrix& m, std::optional<int> cap = std::nullopt);
SeriesTrunc det_cofactor(const PolyMatrix& m, std::optional<int> cap = std::nullopt);
SparsePoly det_bareiss(const PolyMatrix& m);

}  // namespace agcalc
