#include "agcalc/map_file.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "agcalc/errors.hpp"

namespace agcalc {

namespace {

// Largest n for which (xi, z, t) fits a Monomial.
constexpr int kMaxMapVars = (kMaxVars - 1) / 2;

const Json& field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_boolean()) throw ParseError(where + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ParseError(where + ": unknown field '" + it.key() + "'");
  }
}

std::vector<SparsePoly> components_from_json(const Json& j, VarSet vars, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  if (static_cast<int>(j.size()) != vars.n()) {
    throw ParseError(where + ": expected " + std::to_string(vars.n()) + " components, got " +
                     std::to_string(j.size()));
  }
  std::vector<SparsePoly> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(poly_from_json(j[i], vars, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json components_to_json(const MapTuple& m) {
  Json arr = Json::array();
  for (const auto& c : m.components()) arr.push_back(poly_to_json(c.poly()));
  return arr;
}

Json check_to_json(const CheckResult& c) {
  Json j = {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"witness", nullptr}};
  if (c.witness) {
    j["witness"] = {{"monomial", c.witness->monomial},
                    {"lhs", c.witness->lhs},
                    {"rhs", c.witness->rhs}};
  }
  return j;
}

CheckResult check_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  reject_unknown_keys(j, {"name", "pass", "detail", "witness"}, where);
  CheckResult c;
  c.name = string_field(j, "name", where);
  c.pass = bool_field(j, "pass", where);
  c.detail = string_field(j, "detail", where);
  const Json& w = field(j, "witness", where);
  if (!w.is_null()) {
    if (!w.is_object()) throw ParseError(where + ".witness must be an object or null");
    c.witness = Witness{string_field(w, "monomial", where + ".witness"),
                        string_field(w, "lhs", where + ".witness"),
                        string_field(w, "rhs", where + ".witness")};
  }
  return c;
}

void render_data(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      render_data(*it, path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    if (j.empty()) out << path << ": []\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      render_data(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else if (j.is_string()) {
    out << path << ": " << j.get<std::string>() << "\n";
  } else if (j.is_null()) {
    out << path << ": none\n";
  } else {
    out << path << ": " << j.dump() << "\n";
  }
}

}  // namespace

Json poly_to_json(const SparsePoly& p) {
  const VarSet& vars = p.vars();
  if (vars.has_xi() || vars.has_t()) {
    throw ContractError("poly_to_json: only polynomials over z are serialized as term lists");
  }
  Json arr = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json exps = Json::array();
    for (int i = 0; i < vars.n(); ++i) exps.push_back(m[vars.z(i)]);
    arr.push_back({{"coeff", to_string(c)}, {"exps", exps}});
  }
  return arr;
}

SparsePoly poly_from_json(const Json& j, VarSet vars, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array of terms");
  std::vector<SparsePoly::Term> terms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const Json& t = j[k];
    if (!t.is_object()) throw ParseError(at + " must be an object");
    reject_unknown_keys(t, {"coeff", "exps"}, at);
    Rational c;
    try {
      c = parse_rational(string_field(t, "coeff", at));
    } catch (const ParseError& e) {
      throw ParseError(at + ".coeff: " + e.what());
    }
    const Json& exps = field(t, "exps", at);
    if (!exps.is_array() || static_cast<int>(exps.size()) != vars.n()) {
      throw ParseError(at + ".exps must be an array of " + std::to_string(vars.n()) + " integers");
    }
    Monomial m;
    for (int i = 0; i < vars.n(); ++i) {
      const Json& e = exps[static_cast<std::size_t>(i)];
      if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() > 255) {
        throw ParseError(at + ".exps entries must be integers in 0..255");
      }
      m.set(vars.z(i), e.get<int>());
    }
    terms.emplace_back(m, c);
  }
  return SparsePoly::from_terms(vars, std::move(terms));
}

MapFile map_file_from_json(const Json& j) {
  const std::string where = "map file";
  if (!j.is_object()) throw ParseError(where + ": top level must be an object");
  reject_unknown_keys(j, {"n", "name", "family", "trunc", "components", "known_inverse",
                          "known_inverse_t_degree"},
                      where);
  const int n = int_field(j, "n", where);
  if (n < 1 || n > kMaxMapVars) {
    throw ParseError(where + ": n must lie in 1.." + std::to_string(kMaxMapVars));
  }
  const VarSet vars = VarSet::of_z(n);
  MapFile m{"", "", std::nullopt, MapTuple::zero(vars), std::nullopt, std::nullopt};
  if (j.contains("name")) m.name = string_field(j, "name", where);
  if (j.contains("family")) m.family = string_field(j, "family", where);
  if (j.contains("trunc")) {
    m.trunc = int_field(j, "trunc", where);
    if (*m.trunc < 0) throw ParseError(where + ": trunc must be non-negative");
  }

  std::vector<SparsePoly> polys = components_from_json(field(j, "components", where), vars,
                                                       "components");
  std::vector<SeriesTrunc> comps;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const ExtendedInt deg = degree(polys[i]);
    if (m.trunc && deg.is_finite() && deg.value() > *m.trunc) {
      throw ParseError("components[" + std::to_string(i) + "] has a term of degree " +
                       std::to_string(deg.value()) + " above trunc " + std::to_string(*m.trunc));
    }
    const ExtendedInt ord = order(polys[i]);
    if (ord.is_finite() && ord.value() < 2) {
      throw PreconditionError("H must have order >= 2: component " + std::to_string(i + 1) +
                              " has a term of degree " + std::to_string(ord.value()));
    }
    if (m.trunc) {
      comps.emplace_back(polys[i], *m.trunc);
    } else {
      comps.emplace_back(polys[i]);
    }
  }
  m.H = MapTuple(vars, std::move(comps));

  if (j.contains("known_inverse")) {
    m.known_inverse =
        MapTuple::from_polys(vars, components_from_json(j["known_inverse"], vars, "known_inverse"));
  }
  if (j.contains("known_inverse_t_degree")) {
    m.known_inverse_t_degree = int_field(j, "known_inverse_t_degree", where);
    if (*m.known_inverse_t_degree < 0) {
      throw ParseError(where + ": known_inverse_t_degree must be non-negative");
    }
  }
  return m;
}

MapFile parse_map_file(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("map file is not valid JSON: ") + e.what());
  }
  return map_file_from_json(j);
}

Json map_file_to_json(const MapFile& m) {
  Json j = {{"n", m.H.n()}, {"name", m.name}, {"family", m.family}};
  if (m.trunc) j["trunc"] = *m.trunc;
  j["components"] = components_to_json(m.H);
  if (m.known_inverse) j["known_inverse"] = components_to_json(*m.known_inverse);
  if (m.known_inverse_t_degree) j["known_inverse_t_degree"] = *m.known_inverse_t_degree;
  return j;
}

MapFile map_file_from_entry(const CorpusEntry& e) {
  MapFile m{e.id, to_string(e.family), std::nullopt, e.H, e.known_inverse,
            e.known_inverse_t_degree};
  if (!e.H.is_exact()) {
    long t = kUnbounded;
    for (const auto& c : e.H.components()) {
      if (c.trunc()) t = std::min<long>(t, *c.trunc());
    }
    m.trunc = static_cast<int>(t);
    m.H = e.H.truncated(*m.trunc);
  }
  return m;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string input_digest(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

Json report_to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_to_json(c));
  return {{"command", r.command},
          {"input_digest", r.input_digest},
          {"pass", r.pass},
          {"exit_code", r.exit_code},
          {"error", r.error ? Json(*r.error) : Json(nullptr)},
          {"warnings", r.warnings},
          {"checks", checks},
          {"data", r.data}};
}

Report report_from_json(const Json& j) {
  const std::string where = "report";
  if (!j.is_object()) throw ParseError(where + ": top level must be an object");
  reject_unknown_keys(
      j, {"command", "input_digest", "pass", "exit_code", "error", "warnings", "checks", "data"},
      where);
  Report r;
  r.command = string_field(j, "command", where);
  r.input_digest = string_field(j, "input_digest", where);
  r.pass = bool_field(j, "pass", where);
  r.exit_code = int_field(j, "exit_code", where);
  const Json& err = field(j, "error", where);
  if (!err.is_null()) {
    if (!err.is_string()) throw ParseError(where + ": error must be a string or null");
    r.error = err.get<std::string>();
  }
  const Json& warnings = field(j, "warnings", where);
  if (!warnings.is_array()) throw ParseError(where + ": warnings must be an array");
  for (const auto& w : warnings) {
    if (!w.is_string()) throw ParseError(where + ": warnings must hold strings");
    r.warnings.push_back(w.get<std::string>());
  }
  const Json& checks = field(j, "checks", where);
  if (!checks.is_array()) throw ParseError(where + ": checks must be an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    r.checks.push_back(check_from_json(checks[i], "checks[" + std::to_string(i) + "]"));
  }
  r.data = field(j, "data", where);
  if (!r.data.is_object()) throw ParseError(where + ": data must be an object");
  return r;
}

std::string report_to_text(const Report& r) {
  std::ostringstream out;
  out << "agcalc " << r.command << "\n";
  out << "input: " << r.input_digest << "\n";
  render_data(r.data, "", out);
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    if (c.pass) ++passed;
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    if (c.witness) {
      out << ": at " << c.witness->monomial << " lhs = " << c.witness->lhs
          << ", rhs = " << c.witness->rhs;
    }
    out << "\n";
  }
  if (r.error) out << "error: " << *r.error << "\n";
  out << "result: " << (r.pass ? "PASS" : "FAIL") << " (" << passed << "/" << r.checks.size()
      << " checks passed, exit " << r.exit_code << ")\n";
  return out.str();
}

}  // namespace agcalc
