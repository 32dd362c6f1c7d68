#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "agcalc/inversion.hpp"
#include "agcalc/jacobian_lab.hpp"
#include "agcalc/map_file.hpp"

namespace agcalc::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitResourceGuard = 3;

// Checks plus payload produced by one command body.
struct Suite {
  std::vector<CheckResult> checks;
  Json data = Json::object();
  std::vector<std::string> warnings;
};

// G by each requested method, cross-method equality, round trip and the
// cutoff audit.
Suite invert_suite(const MapTuple& H, int D, const std::vector<InversionMethod>& methods);

// Inversion and identity suite for weight q. K above D is capped at D with a
// warning. Needs H known through degree D + 1.
Suite verify_suite(const MapTuple& H, int D, int K, const SparsePoly& q);

// which: nilpotent, scan0, scan1, equiv or all. Throws ScanAborted when the
// term ceiling is hit.
Suite lab_suite(const MapTuple& H, int m_max, const std::string& which, const InstanceFacts& facts,
                std::size_t ceiling);

// Entry point of the agcalc tool. args excludes the program name. Returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agcalc::cli
