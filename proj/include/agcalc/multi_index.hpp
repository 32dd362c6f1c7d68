#pragma once

#include <vector>

#include "agcalc/rational.hpp"

namespace agcalc {

// alpha = (k_1, ..., k_n) with non-negative entries.
using MultiIndex = std::vector<int>;

int weight(const MultiIndex& a);               // |alpha|
Integer factorial(const MultiIndex& a);        // k_1! ... k_n!
// alpha! / (beta! (alpha - beta)!) when beta <= alpha componentwise, else 0.
Integer binomial(const MultiIndex& alpha, const MultiIndex& beta);
// alpha! / (alpha - beta)! (falling factorial), 0 unless beta <= alpha.
Integer falling_factorial(const MultiIndex& alpha, const MultiIndex& beta);

// All alpha in N^n with |alpha| == k, in lexicographically descending order.
std::vector<MultiIndex> multi_indices_of_weight(int n, int k);
// All beta <= alpha componentwise.
std::vector<MultiIndex> sub_indices(const MultiIndex& alpha);

}  // namespace agcalc
