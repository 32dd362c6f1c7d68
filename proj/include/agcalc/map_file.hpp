#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "agcalc/corpus.hpp"
#include "agcalc/report.hpp"
#include "agcalc/series.hpp"

namespace agcalc {

using Json = nlohmann::json;

// JSON map file: components of H as term lists with string rationals.
struct MapFile {
  std::string name;
  std::string family;
  // When set, every component is a series known through this z-degree.
  std::optional<int> trunc;
  MapTuple H;
  std::optional<MapTuple> known_inverse;
  std::optional<int> known_inverse_t_degree;
};

// Throws ParseError on malformed JSON or fields and PreconditionError when
// o(H) < 2.
MapFile parse_map_file(std::string_view text);
MapFile map_file_from_json(const Json& j);
Json map_file_to_json(const MapFile& m);
MapFile map_file_from_entry(const CorpusEntry& e);

// [{"coeff": "p/q", "exps": [...]}, ...] over the z variables of `vars`.
Json poly_to_json(const SparsePoly& p);
SparsePoly poly_from_json(const Json& j, VarSet vars, const std::string& where);

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a64:" followed by 16 hex digits.
std::string input_digest(std::string_view bytes);

// Outcome of one CLI invocation. `data` holds the command-specific payload.
struct Report {
  std::string command;
  std::string input_digest;
  bool pass = true;
  int exit_code = 0;
  std::optional<std::string> error;
  std::vector<std::string> warnings;
  std::vector<CheckResult> checks;
  Json data = Json::object();
};

Json report_to_json(const Report& r);
// Throws ParseError when a field is missing or has the wrong type.
Report report_from_json(const Json& j);
// Human-readable rendering; deterministic.
std::string report_to_text(const Report& r);

}  // namespace agcalc
