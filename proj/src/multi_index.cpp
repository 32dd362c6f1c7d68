#include "agcalc/multi_index.hpp"

#include <numeric>

#include "agcalc/errors.hpp"

namespace agcalc {

int weight(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

Integer factorial(const MultiIndex& a) {
  Integer out = 1;
  for (int k : a) out *= factorial(static_cast<unsigned>(k));
  return out;
}

Integer binomial(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.size() != beta.size()) throw ContractError("multi-index length mismatch");
  Integer out = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (beta[i] > alpha[i] || beta[i] < 0) return 0;
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(alpha[i]),
                 static_cast<unsigned long>(beta[i]));
    out *= b;
  }
  return out;
}

Integer falling_factorial(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.size() != beta.size()) throw ContractError("multi-index length mismatch");
  Integer out = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (beta[i] > alpha[i] || beta[i] < 0) return 0;
    for (int j = 0; j < beta[i]; ++j) out *= alpha[i] - j;
  }
  return out;
}

namespace {

void weight_rec(int n, int k, MultiIndex& cur, std::size_t pos, std::vector<MultiIndex>& out) {
  if (pos + 1 == static_cast<std::size_t>(n)) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[pos] = e;
    weight_rec(n, k - e, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_weight(int n, int k) {
  if (n < 1 || k < 0) throw ContractError("invalid multi-index enumeration request");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  weight_rec(n, k, cur, 0, out);
  return out;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
  std::vector<MultiIndex> out{MultiIndex(alpha.size(), 0)};
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::size_t existing = out.size();
    for (int e = 1; e <= alpha[i]; ++e) {
      for (std::size_t j = 0; j < existing; ++j) {
        MultiIndex b = out[j];
        b[i] = e;
        out.push_back(std::move(b));
      }
    }
  }
  return out;
}

}  // namespace agcalc
