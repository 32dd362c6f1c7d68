#include "agcalc/report.hpp"

#include <algorithm>

#include "agcalc/errors.hpp"

namespace agcalc {

std::optional<Witness> first_difference(const SparsePoly& lhs, const SparsePoly& rhs) {
  if (!(lhs.vars() == rhs.vars())) throw ContractError("comparison across variable sets");
  SparsePoly diff = lhs - rhs;
  if (diff.is_zero()) return std::nullopt;
  const Monomial& m = diff.terms().front().first;
  return Witness{to_string(m, lhs.vars()), to_string(lhs.coeff(m)), to_string(rhs.coeff(m))};
}

CheckResult check_equal(std::string name, const SparsePoly& lhs, const SparsePoly& rhs) {
  CheckResult r;
  r.name = std::move(name);
  r.witness = first_difference(lhs, rhs);
  r.pass = !r.witness.has_value();
  return r;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace agcalc
