#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "agcalc/errors.hpp"
#include "agcalc/report.hpp"
#include "agcalc/series.hpp"

namespace agcalc {

inline constexpr std::size_t kDefaultTermCeiling = 10'000'000;

// AGCALC_TERM_CEILING when set (a positive integer), else the default.
// Throws ParseError on a malformed value.
std::size_t term_ceiling_from_env();

struct NilpotencyResult {
  bool nilpotent = false;
  // det(I - t JH) over (z, t).
  SparsePoly certificate;
};

// JH is nilpotent iff det(I - t JH) = 1. H must be exact.
NilpotencyResult is_nilpotent(const MapTuple& H);

struct VanishingEntry {
  int m = 0;
  SparsePoly value;
};

// Lambda^m(P^(m+k)) for a range of m.
struct VanishingReport {
  std::string map_id;
  int k = 0;
  int m_max = 0;
  std::vector<VanishingEntry> values;
  std::optional<int> first_nonzero;
  // Largest m with a nonzero value.
  std::optional<int> last_nonzero;
  // Set only when a stabilization index is known for the instance.
  std::optional<bool> stabilized;
  // False when the term ceiling stopped the scan early.
  bool complete = true;
};

// Raised when a scan exceeds the term ceiling; carries the values computed so far.
class ScanAborted : public ResourceGuardError {
 public:
  ScanAborted(const std::string& what, VanishingReport partial)
      : ResourceGuardError(what), partial_(std::move(partial)) {}
  const VanishingReport& partial() const { return partial_; }

 private:
  VanishingReport partial_;
};

// P = <xi, H> over (xi, z) for exact H over z.
SparsePoly pairing_poly(const MapTuple& H);

// Lambda^m(P^(m+k)) for 1 <= m <= m_max (k = 0) or 0 <= m <= m_max (k = 1).
VanishingReport vanishing_scan(const MapTuple& H, int k, int m_max,
                               std::size_t ceiling = kDefaultTermCeiling,
                               const std::string& map_id = "");
// Same scan for an arbitrary P over (xi, z); no equivalence claims attach.
VanishingReport vanishing_scan_general(const SparsePoly& P, int k, int m_max,
                                       std::size_t ceiling = kDefaultTermCeiling,
                                       const std::string& map_id = "");

struct GtSeriesResult {
  // sum_{m <= m_max} t^m Lambda^m(P^m) / (m!)^2 over (z, t).
  SparsePoly series;
  // Against JG_t from the fixed-point inverse of z - tH, t-degree <= m_max.
  CheckResult oracle;
};

GtSeriesResult jacobian_Gt_series(const MapTuple& H, int m_max,
                                  std::size_t ceiling = kDefaultTermCeiling);

struct NtSeriesResult {
  // sum_{m <= m_max} t^m Lambda^m(P^(m+1)) / (m! (m+1)!) over (xi, z, t).
  SparsePoly series;
  // N_t read off the xi_i coefficients, over (z, t).
  MapTuple N_t;
  // Against (G_t - z) / t from the fixed-point inverse, t-degree <= m_max.
  CheckResult oracle;
};

// Requires nilpotent JH; throws PreconditionError otherwise.
NtSeriesResult Nt_series(const MapTuple& H, int m_max,
                         std::size_t ceiling = kDefaultTermCeiling);

// Known facts about an instance, typically from corpus metadata.
struct InstanceFacts {
  std::optional<MapTuple> known_inverse;
  std::optional<int> known_inverse_t_degree;
};

struct EquivalenceReport {
  std::string map_id;
  bool nilpotent = false;
  SparsePoly certificate;
  VanishingReport scan0;
  std::optional<VanishingReport> scan1;
  std::optional<int> witness_m;
  std::optional<int> stabilization_index;
  std::vector<CheckResult> checks;
  std::vector<std::string> skipped;

  bool pass() const { return all_pass(checks); }
};

// Instance-level consistency of nilpotency, the vanishing scans and the
// deformation series.
EquivalenceReport check_equivalences(const MapTuple& H, int m_max, const InstanceFacts& facts = {},
                                     std::size_t ceiling = kDefaultTermCeiling,
                                     const std::string& map_id = "");

}  // namespace agcalc
