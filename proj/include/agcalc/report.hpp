#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agcalc/poly.hpp"

namespace agcalc {

// First coefficient where two sides of an identity disagree.
struct Witness {
  std::string monomial;
  std::string lhs;
  std::string rhs;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::optional<Witness> witness;
  std::string detail;
};

// Exact comparison; on mismatch reports the first differing monomial in
// canonical order. Both sides must share a VarSet.
std::optional<Witness> first_difference(const SparsePoly& lhs, const SparsePoly& rhs);

CheckResult check_equal(std::string name, const SparsePoly& lhs, const SparsePoly& rhs);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace agcalc
