#include "agcalc/corpus.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

#include "agcalc/errors.hpp"
#include "agcalc/jacobian_lab.hpp"

namespace agcalc {

namespace {

// mt19937_64 output is fixed by the standard; the range mapping is done here
// so results do not depend on the library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int range(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Rational coeff() {
    int c = range(1, 3) * (range(0, 1) == 0 ? 1 : -1);
    Rational r(c, range(0, 3) == 0 ? 2 : 1);
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 gen_;
};

using IntMatrix = std::vector<std::vector<int>>;

// Random polynomial over Z(n) in the variables `allowed` (0-based z indices)
// with every term of total degree in [lo, hi].
SparsePoly random_poly(Rng& rng, int n, const std::vector<int>& allowed, int lo, int hi,
                       int terms) {
  const VarSet vars = VarSet::of_z(n);
  for (;;) {
    std::vector<SparsePoly::Term> out;
    for (int k = 0; k < terms; ++k) {
      const int deg = rng.range(lo, hi);
      Monomial m;
      for (int e = 0; e < deg; ++e) {
        m.add(vars.z(allowed[static_cast<std::size_t>(
                  rng.range(0, static_cast<int>(allowed.size()) - 1))]),
              1);
      }
      out.emplace_back(m, rng.coeff());
    }
    SparsePoly p = SparsePoly::from_terms(vars, std::move(out));
    if (!p.is_zero()) return p;
  }
}

std::vector<int> later_vars(int i, int n) {
  std::vector<int> v;
  for (int j = i + 1; j < n; ++j) v.push_back(j);
  return v;
}

std::vector<int> all_vars(int n) { return later_vars(-1, n); }

std::string entry_id(Family f, int n, int idx) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-n%d-%02d", to_string(f).c_str(), n, idx);
  return buf;
}

// Inverse of z - tH for strictly triangular H by back-substitution, over (z, t).
std::vector<SparsePoly> triangular_inverse_t(const MapTuple& H) {
  const int n = H.n();
  const VarSet zt = VarSet::of_z_t(n);
  const SparsePoly t = SparsePoly::variable(zt, zt.t());
  std::vector<SparsePoly> G;
  for (int i = 0; i < n; ++i) G.push_back(SparsePoly::variable(zt, zt.z(i)));
  for (int i = n - 1; i >= 0; --i) {
    G[static_cast<std::size_t>(i)] += mul(t, substitute_z(H[i].poly(), G));
  }
  return G;
}

// Fills known_inverse (t = 1) and the t-degree of N_t from G_t over (z, t).
void attach_inverse(CorpusEntry& e, const std::vector<SparsePoly>& G_t) {
  const int n = e.H.n();
  const VarSet z = VarSet::of_z(n);
  const VarSet zt = VarSet::of_z_t(n);
  std::vector<SparsePoly> g1;
  ExtendedInt tdeg = ExtendedInt::neg_inf();
  for (int i = 0; i < n; ++i) {
    const SparsePoly& g = G_t[static_cast<std::size_t>(i)];
    SparsePoly N = g - SparsePoly::variable(zt, zt.z(i));
    tdeg = std::max(tdeg, t_degree(N));
    g1.push_back(embed(substitute_t(g, 1), z));
  }
  e.known_inverse = MapTuple::from_polys(z, g1);
  if (tdeg.is_finite()) e.known_inverse_t_degree = tdeg.value() - 1;
}

MapTuple from_components(int n, std::vector<SparsePoly> comps) {
  return MapTuple::from_polys(VarSet::of_z(n), comps);
}

CorpusEntry make_triangular(const MapTuple& H, Family f, const std::string& id) {
  CorpusEntry e{id, f, H, true, std::nullopt, std::nullopt};
  attach_inverse(e, triangular_inverse_t(H));
  return e;
}

std::vector<CorpusEntry> gen_triangular(const CorpusDescriptor& d) {
  Rng rng(d.seed);
  const int n = d.n;
  const VarSet z = VarSet::of_z(n);
  std::vector<CorpusEntry> out;
  for (int idx = 0; idx < d.count; ++idx) {
    std::vector<SparsePoly> comps(static_cast<std::size_t>(n), SparsePoly(z));
    if (n >= 2 && idx == 0) {
      comps[0] = parse_poly("z2^2", z);
    } else if (n >= 2 && idx == 1 && d.max_degree >= 3) {
      comps[0] = parse_poly("z2^3", z);
    } else {
      for (int i = 0; i + 1 < n; ++i) {
        comps[static_cast<std::size_t>(i)] =
            random_poly(rng, n, later_vars(i, n), 2, d.max_degree, rng.range(1, d.max_terms));
      }
    }
    out.push_back(make_triangular(from_components(n, std::move(comps)), d.family,
                                  entry_id(d.family, n, idx)));
  }
  return out;
}

// Unimodular T as a product of elementary matrices, with its inverse.
std::pair<IntMatrix, IntMatrix> unimodular(Rng& rng, int n) {
  IntMatrix T(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  IntMatrix Ti = T;
  for (int i = 0; i < n; ++i) T[i][i] = Ti[i][i] = 1;
  for (int s = 0; s < n + 1; ++s) {
    int i = rng.range(0, n - 1);
    int j = rng.range(0, n - 2);
    if (j >= i) ++j;
    const int c = rng.range(0, 1) == 0 ? 1 : -1;
    // T <- T (I + c e_ij): column j += c * column i.
    for (int r = 0; r < n; ++r) T[r][j] += c * T[r][i];
    // Ti <- (I - c e_ij) Ti: row i -= c * row j.
    for (int k = 0; k < n; ++k) Ti[i][k] -= c * Ti[j][k];
  }
  return {T, Ti};
}

std::vector<SparsePoly> linear_map(const IntMatrix& A, VarSet vars) {
  const int n = vars.n();
  std::vector<SparsePoly> out;
  for (int i = 0; i < n; ++i) {
    SparsePoly p(vars);
    for (int j = 0; j < n; ++j) {
      if (A[i][j] != 0) p += SparsePoly::variable(vars, vars.z(j)) * Rational(A[i][j]);
    }
    out.push_back(p);
  }
  return out;
}

// A^{-1} applied componentwise: out_i = sum_j A_ij v_j.
std::vector<SparsePoly> apply_matrix(const IntMatrix& A, const std::vector<SparsePoly>& v) {
  std::vector<SparsePoly> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    SparsePoly p(v.front().vars());
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (A[i][j] != 0) p += v[j] * Rational(A[i][j]);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<CorpusEntry> gen_conjugated(const CorpusDescriptor& d) {
  if (d.n < 2) throw ContractError("conjugated-cubic family needs n >= 2");
  Rng rng(d.seed);
  const int n = d.n;
  const VarSet z = VarSet::of_z(n);
  const VarSet zt = VarSet::of_z_t(n);
  std::vector<CorpusEntry> out;
  for (int idx = 0; idx < d.count; ++idx) {
    std::vector<SparsePoly> comps(static_cast<std::size_t>(n), SparsePoly(z));
    for (int i = 0; i + 1 < n; ++i) {
      comps[static_cast<std::size_t>(i)] =
          random_poly(rng, n, later_vars(i, n), 3, 3, rng.range(1, d.max_terms));
    }
    const MapTuple base = from_components(n, comps);
    const std::vector<SparsePoly> G_t = triangular_inverse_t(base);
    auto [T, Ti] = unimodular(rng, n);

    // H' = T^{-1} H(Tz), G'_t = T^{-1} G_t(Tz).
    std::vector<SparsePoly> Hc = apply_matrix(Ti, [&] {
      std::vector<SparsePoly> v;
      for (const auto& c : comps) v.push_back(substitute_z(c, linear_map(T, z)));
      return v;
    }());
    std::vector<SparsePoly> Gc = apply_matrix(Ti, [&] {
      std::vector<SparsePoly> v;
      for (const auto& g : G_t) v.push_back(substitute_z(g, linear_map(T, zt)));
      return v;
    }());

    CorpusEntry e{entry_id(d.family, n, idx), d.family, from_components(n, Hc), true,
                  std::nullopt, std::nullopt};
    if (!is_nilpotent(e.H).nilpotent) {
      throw std::logic_error("conjugation broke nilpotency for " + e.id);
    }
    attach_inverse(e, Gc);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CorpusEntry> gen_controls(const CorpusDescriptor& d) {
  Rng rng(d.seed);
  const int n = d.n;
  const VarSet z = VarSet::of_z(n);
  std::vector<CorpusEntry> out;
  for (int idx = 0; idx < d.count; ++idx) {
    std::vector<SparsePoly> comps(static_cast<std::size_t>(n), SparsePoly(z));
    MapTuple H = from_components(n, comps);
    if (idx == 0) {
      comps[0] = parse_poly("z1^2", z);
      H = from_components(n, comps);
    } else {
      do {
        for (int i = 0; i < n; ++i) {
          comps[static_cast<std::size_t>(i)] =
              random_poly(rng, n, all_vars(n), 2, d.max_degree, rng.range(1, d.max_terms));
        }
        H = from_components(n, comps);
      } while (is_nilpotent(H).nilpotent);
    }
    out.push_back(CorpusEntry{entry_id(d.family, n, idx), d.family, H, false, std::nullopt,
                              std::nullopt});
  }
  return out;
}

std::vector<CorpusEntry> gen_series(const CorpusDescriptor& d) {
  Rng rng(d.seed);
  const int n = d.n;
  const VarSet z = VarSet::of_z(n);
  std::vector<CorpusEntry> out;
  for (int idx = 0; idx < d.count; ++idx) {
    std::vector<SeriesTrunc> comps;
    if (n == 1 && idx == 0) {
      comps.emplace_back(parse_poly("z1^2", z));
    } else {
      const int hi = std::min(d.series_trunc, 6);
      for (int i = 0; i < n; ++i) {
        SparsePoly p = random_poly(rng, n, all_vars(n), 2, hi, rng.range(1, d.max_terms + 2));
        comps.emplace_back(p, d.series_trunc);
      }
    }
    out.push_back(CorpusEntry{entry_id(d.family, n, idx), d.family, MapTuple(z, std::move(comps)),
                              std::nullopt, std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Triangular: return "triangular";
    case Family::ConjugatedCubic: return "conjugated-cubic";
    case Family::Control: return "control";
    case Family::Series: return "series";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::Triangular, Family::ConjugatedCubic, Family::Control, Family::Series}) {
    if (to_string(f) == s) return f;
  }
  throw ContractError("unknown corpus family '" + s +
                      "' (expected triangular, conjugated-cubic, control or series)");
}

std::vector<CorpusEntry> gen_corpus(const CorpusDescriptor& d) {
  if (d.n < 1 || d.n > 4) throw ContractError("corpus descriptor: n must lie in 1..4");
  if (d.count < 1) throw ContractError("corpus descriptor: count must be >= 1");
  if (d.max_degree < 2) throw ContractError("corpus descriptor: max_degree must be >= 2");
  if (d.max_terms < 1) throw ContractError("corpus descriptor: max_terms must be >= 1");
  if (d.series_trunc < 2) throw ContractError("corpus descriptor: series_trunc must be >= 2");
  switch (d.family) {
    case Family::Triangular: return gen_triangular(d);
    case Family::ConjugatedCubic: return gen_conjugated(d);
    case Family::Control: return gen_controls(d);
    case Family::Series: return gen_series(d);
  }
  throw ContractError("corpus descriptor: unknown family");
}

std::vector<CorpusEntry> default_corpus(std::uint64_t seed) {
  struct Part {
    Family family;
    int n;
    int count;
  };
  const Part parts[] = {
      {Family::Series, 1, 3},          {Family::Triangular, 2, 4},
      {Family::Triangular, 3, 4},      {Family::ConjugatedCubic, 2, 2},
      {Family::ConjugatedCubic, 3, 3}, {Family::Control, 1, 2},
      {Family::Control, 2, 3},         {Family::Control, 3, 2},
      {Family::Series, 2, 2},          {Family::Series, 3, 1},
  };
  std::vector<CorpusEntry> out;
  std::uint64_t k = 0;
  for (const Part& p : parts) {
    CorpusDescriptor d;
    d.family = p.family;
    d.n = p.n;
    d.count = p.count;
    d.seed = seed * 1000 + k++;
    for (auto& e : gen_corpus(d)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace agcalc
