#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agcalc/series.hpp"

namespace agcalc {

enum class Family { Triangular, ConjugatedCubic, Control, Series };

std::string to_string(Family f);
// Accepts "triangular", "conjugated-cubic", "control", "series".
Family parse_family(const std::string& s);

struct CorpusDescriptor {
  Family family = Family::Triangular;
  int n = 2;
  int count = 4;
  int max_degree = 3;
  int max_terms = 3;
  // Truncation order of the series family.
  int series_trunc = 10;
  std::uint64_t seed = 1;
};

struct CorpusEntry {
  std::string id;
  Family family = Family::Triangular;
  MapTuple H;
  std::optional<bool> expected_nilpotent;
  // Polynomial inverse of z - H.
  std::optional<MapTuple> known_inverse;
  // t-degree of N_t where z - tH has inverse z + t N_t.
  std::optional<int> known_inverse_t_degree;
};

// Deterministic for a fixed descriptor. Throws ContractError on an invalid
// descriptor (n outside 1..4, count < 1, degree bounds, family/n mismatch).
std::vector<CorpusEntry> gen_corpus(const CorpusDescriptor& d);

// Mixed families over n = 1, 2, 3 used by the acceptance runs.
std::vector<CorpusEntry> default_corpus(std::uint64_t seed = 1);

}  // namespace agcalc
