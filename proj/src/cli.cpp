#include "agcalc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <thread>

#include "CLI11.hpp"

#include "agcalc/corpus.hpp"
#include "agcalc/errors.hpp"
#include "agcalc/weyl.hpp"

namespace agcalc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Timing lines go to stderr only, so reports stay byte-identical.
class Timing {
 public:
  Timing(bool enabled, std::ostream& err) : enabled_(enabled), err_(err) {}
  void record(const std::string& what, double secs) {
    if (enabled_) err_ << "timing " << what << " " << secs << "s\n";
  }

 private:
  bool enabled_;
  std::ostream& err_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

InversionMethod parse_method(const std::string& s) {
  if (s == "fixedpoint") return InversionMethod::FixedPoint;
  if (s == "ag") return InversionMethod::AbhyankarGurjar;
  if (s == "lambda") return InversionMethod::LambdaSeries;
  throw ContractError("unknown method '" + s + "'");
}

Json tuple_strings(const MapTuple& m) {
  Json arr = Json::array();
  for (const auto& c : m.components()) arr.push_back(to_string(c.poly()));
  return arr;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json scan_to_json(const VanishingReport& r) {
  Json values = Json::array();
  for (const auto& [m, v] : r.values) values.push_back("m=" + std::to_string(m) + ": " + to_string(v));
  return {{"k", r.k},
          {"m_max", r.m_max},
          {"complete", r.complete},
          {"first_nonzero", optional_int(r.first_nonzero)},
          {"last_nonzero", optional_int(r.last_nonzero)},
          {"stabilized", r.stabilized ? Json(*r.stabilized) : Json(nullptr)},
          {"values", values}};
}

CheckResult audit_check(const CutoffAudit& audit) {
  CheckResult c;
  c.name = "cutoff_audit";
  c.pass = audit.violations == 0;
  c.detail = std::to_string(audit.checks) + " cutoffs checked, " +
             std::to_string(audit.violations) + " violations";
  if (!audit.messages.empty()) c.detail += ": " + audit.messages.front();
  return c;
}

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more) {
  for (auto& c : more) out.push_back(std::move(c));
}

std::vector<CheckResult> compare_tuples(const std::string& label, const MapTuple& a,
                                        const MapTuple& b) {
  std::vector<CheckResult> out;
  for (int i = 0; i < a.n(); ++i) {
    out.push_back(check_equal(label + "_G" + std::to_string(i + 1), a[i].poly(), b[i].poly()));
  }
  return out;
}

void finish(Report& r) {
  if (r.exit_code == kExitPass) {
    r.pass = all_pass(r.checks);
    r.exit_code = r.pass ? kExitPass : kExitVerificationFailure;
  } else {
    r.pass = false;
  }
}

int emit(Report& r, const std::string& format, const std::string& out_path, std::ostream& out,
         std::ostream& err) {
  finish(r);
  const std::string json_text = report_to_json(r).dump(2) + "\n";
  if (format == "json") {
    out << json_text;
  } else {
    out << report_to_text(r);
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitInputError;
    }
    f << json_text;
  }
  return r.exit_code;
}

// Per-instance result of a corpus run.
struct InstanceOutcome {
  std::string id;
  std::string family;
  int n = 0;
  std::vector<CheckResult> checks;
  std::optional<std::string> skipped;
  std::optional<std::string> error;
  bool resource_guard = false;
  double seconds = 0;
};

}  // namespace

Suite invert_suite(const MapTuple& H, int D, const std::vector<InversionMethod>& methods) {
  Suite s;
  s.data["degree"] = D;
  CutoffAudit audit;
  bool audited = false;
  std::vector<InversionResult> results;
  for (InversionMethod m : methods) {
    switch (m) {
      case InversionMethod::FixedPoint: results.push_back(invert_fixed_point(H, D)); break;
      case InversionMethod::AbhyankarGurjar:
        results.push_back(invert_ag(H, D, &audit));
        audited = true;
        break;
      case InversionMethod::LambdaSeries:
        results.push_back(invert_lambda(H, D, &audit));
        audited = true;
        break;
    }
    s.data["G"][to_string(m)] = tuple_strings(results.back().G);
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    append(s.checks, compare_tuples(to_string(results[i].method) + "_vs_" +
                                        to_string(results.front().method),
                                    results[i].G, results.front().G));
  }
  append(s.checks, round_trip_checks(H, results.front().G, D));
  if (audited) s.checks.push_back(audit_check(audit));
  return s;
}

Suite verify_suite(const MapTuple& H, int D, int K, const SparsePoly& q) {
  Suite s;
  if (D < 1) throw ContractError("verify: degree must be >= 1");
  if (K < 0) throw ContractError("verify: xi-degree must be >= 0");
  if (K > D) {
    s.warnings.push_back("window rule: xi-degree " + std::to_string(K) + " exceeds degree " +
                         std::to_string(D) + ", using K = " + std::to_string(D));
    K = D;
  }
  if (H.valid_through() < D + 1) {
    throw ContractError("verify: H must be known through degree " + std::to_string(D + 1) +
                        " (chain rule and the proof identity need G one degree deeper)");
  }
  const VarSet zvars = H.vars();
  const SeriesTrunc qs(embed(q, zvars));
  s.data["degree"] = D;
  s.data["xi_degree"] = K;
  s.data["q"] = to_string(qs.poly());

  CutoffAudit audit;
  const InversionResult fp_deep = invert_fixed_point(H, D + 1);
  const MapTuple G = fp_deep.G.truncated(D);
  const MapTuple N = fp_deep.N.truncated(D);
  const SeriesTrunc jf = jacobian_of_f(H, D);
  s.data["G"] = tuple_strings(G);
  s.data["JF"] = to_string(truncate(jf.poly(), D));
  s.data["JF_is_one"] = truncate(jf.poly(), D) == SparsePoly::constant(zvars, 1);

  append(s.checks, round_trip_checks(H, G, D));
  append(s.checks, compare_tuples("abhyankar_gurjar_vs_fixed_point", invert_ag(H, D, &audit).G, G));
  append(s.checks, compare_tuples("lambda_series_vs_fixed_point", invert_lambda(H, D, &audit).G, G));
  s.checks.push_back(chain_rule_check(H, fp_deep.G, D));
  s.checks.push_back(ag_proof_identity(qs, H, D));

  const SparsePoly qg = truncate(compose(qs, G, D).poly(), D);
  s.checks.push_back(check_equal("ag_apply_q", truncate(ag_apply(qs, H, D, &audit).poly(), D), qg));
  s.checks.push_back(
      check_equal("lambda_series_q_of_G", truncate(q_compose_G(qs, H, D, &audit).poly(), D), qg));

  const VarSet xvars = VarSet::of_xi_z(H.n());
  const SparsePoly pn = pairing(N).poly();
  SparsePoly pn_k = SparsePoly::constant(xvars, 1);
  for (int k = 1; k <= K; ++k) {
    pn_k = mul(pn_k, pn, D);
    SparsePoly rhs = mul(embed(qg, xvars), pn_k, D);
    s.checks.push_back(check_equal("xi_moment_k" + std::to_string(k),
                                   xi_moment_series(H, qs, k, D, &audit), rhs));
  }

  s.checks.push_back(verify_phi_identity(H, qs, K, D));

  const SparsePoly P = truncate(pairing(H).poly(), D);
  SparsePoly f = embed(qs.poly(), xvars);
  for (int k = 0; k <= std::min(K, 2); ++k) {
    if (k > 0) f = mul(f, P, D);
    CheckResult c = verify_phi_is_RLinv(f);
    c.name += "_k" + std::to_string(k);
    s.checks.push_back(std::move(c));
  }
  s.checks.push_back(audit_check(audit));
  return s;
}

Suite lab_suite(const MapTuple& H, int m_max, const std::string& which, const InstanceFacts& facts,
                std::size_t ceiling) {
  Suite s;
  s.data["m_max"] = m_max;
  if (which == "nilpotent") {
    NilpotencyResult nil = is_nilpotent(H);
    s.data["nilpotent"] = nil.nilpotent;
    s.data["certificate"] = to_string(nil.certificate);
    return s;
  }
  if (which == "scan0" || which == "scan1") {
    const int k = which == "scan0" ? 0 : 1;
    VanishingReport r = vanishing_scan(H, k, m_max, ceiling);
    if (k == 1 && facts.known_inverse_t_degree) {
      const int d = *facts.known_inverse_t_degree;
      if (d < m_max) {
        r.stabilized = r.last_nonzero == d;
        CheckResult c;
        c.name = "stabilization_index";
        c.pass = *r.stabilized;
        c.detail = "expected " + std::to_string(d) + ", observed " +
                   (r.last_nonzero ? std::to_string(*r.last_nonzero) : "none");
        s.checks.push_back(std::move(c));
      } else {
        s.warnings.push_back("m-max must exceed the known t-degree " + std::to_string(d) +
                             " to confirm stabilization");
      }
    }
    s.data[which] = scan_to_json(r);
    return s;
  }
  if (which != "equiv" && which != "all") throw ContractError("unknown lab check '" + which + "'");
  EquivalenceReport rep = check_equivalences(H, m_max, facts, ceiling);
  s.data["nilpotent"] = rep.nilpotent;
  s.data["certificate"] = to_string(rep.certificate);
  s.data["scan0"] = scan_to_json(rep.scan0);
  s.data["scan1"] = rep.scan1 ? scan_to_json(*rep.scan1) : Json(nullptr);
  s.data["witness_m"] = optional_int(rep.witness_m);
  s.data["stabilization_index"] = optional_int(rep.stabilization_index);
  s.data["skipped"] = rep.skipped;
  s.checks = std::move(rep.checks);
  return s;
}

namespace {

Report report_for(const std::string& command, const std::string& digest, Suite suite) {
  Report r;
  r.command = command;
  r.input_digest = digest;
  r.checks = std::move(suite.checks);
  r.data = std::move(suite.data);
  r.warnings = std::move(suite.warnings);
  return r;
}

InstanceOutcome run_instance(const CorpusEntry& e, const std::string& suite, int D, int K, int M,
                             std::size_t ceiling) {
  InstanceOutcome o;
  o.id = e.id;
  o.family = to_string(e.family);
  o.n = e.H.n();
  const auto t0 = Clock::now();
  try {
    if (suite == "invert-all") {
      o.checks = invert_suite(e.H, D,
                              {InversionMethod::FixedPoint, InversionMethod::AbhyankarGurjar,
                               InversionMethod::LambdaSeries})
                     .checks;
    } else if (suite == "verify") {
      o.checks = verify_suite(e.H, D, K, SparsePoly::constant(e.H.vars(), 1)).checks;
    } else if (suite == "lab") {
      if (!e.H.is_exact()) {
        o.skipped = "lab runs on polynomial maps only";
      } else {
        o.checks = lab_suite(e.H, M, "all", {e.known_inverse, e.known_inverse_t_degree}, ceiling)
                       .checks;
        if (e.expected_nilpotent) {
          const bool got = is_nilpotent(e.H).nilpotent;
          CheckResult c;
          c.name = "expected_nilpotent";
          c.pass = got == *e.expected_nilpotent;
          c.detail = std::string("expected ") + (*e.expected_nilpotent ? "true" : "false") +
                     ", got " + (got ? "true" : "false");
          o.checks.push_back(std::move(c));
        }
      }
    }
  } catch (const ResourceGuardError& ex) {
    o.error = ex.what();
    o.resource_guard = true;
  } catch (const std::exception& ex) {
    o.error = ex.what();
  }
  o.seconds = seconds_since(t0);
  return o;
}

std::vector<InstanceOutcome> run_parallel(const std::vector<CorpusEntry>& corpus,
                                          const std::string& suite, int D, int K, int M,
                                          std::size_t ceiling) {
  std::vector<InstanceOutcome> out(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      out[i] = run_instance(corpus[i], suite, D, K, M, ceiling);
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t count = std::min<std::size_t>(hw, corpus.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < count; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return out;
}

struct Options {
  std::string format = "text";
  std::string out_path;
  bool timing = false;

  std::string map_path;
  int degree = 8;
  std::string method = "all";
  int xi_degree = 2;
  std::string q = "1";
  int m_max = 6;
  std::string checks = "all";

  std::vector<std::string> families;
  std::vector<int> ns{2};
  int count = 4;
  std::uint64_t seed = 1;
  std::string suite = "invert-all";
  std::string emit_dir;
};

void add_output_flags(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--out", o.out_path, "Also write the JSON report to this file");
  sub->add_flag("--timing", o.timing, "Print timings to stderr");
}

int run_map_command(const std::string& name, const Options& o, const std::string& command,
                    std::ostream& out, std::ostream& err) {
  Timing timing(o.timing, err);
  const std::string text = read_file(o.map_path);
  const std::string digest = input_digest(text);
  const MapFile map = parse_map_file(text);
  const MapTuple& H = map.H;
  const auto t0 = Clock::now();
  Report r;
  if (name == "invert") {
    std::vector<InversionMethod> methods;
    if (o.method == "all") {
      methods = {InversionMethod::FixedPoint, InversionMethod::AbhyankarGurjar,
                 InversionMethod::LambdaSeries};
    } else {
      methods = {parse_method(o.method)};
    }
    r = report_for(command, digest, invert_suite(H, o.degree, methods));
  } else if (name == "verify") {
    SparsePoly q = parse_poly(o.q, VarSet::of_z(H.n()));
    r = report_for(command, digest, verify_suite(H, o.degree, o.xi_degree, q));
  } else {
    const std::size_t ceiling = term_ceiling_from_env();
    try {
      r = report_for(command, digest,
                     lab_suite(H, o.m_max, o.checks,
                               {map.known_inverse, map.known_inverse_t_degree}, ceiling));
    } catch (const ScanAborted& e) {
      r.command = command;
      r.input_digest = digest;
      r.data["scan_partial"] = scan_to_json(e.partial());
      r.data["term_ceiling"] = ceiling;
      r.error = e.what();
      r.exit_code = kExitResourceGuard;
    }
  }
  r.data["map"] = map.name;
  r.data["n"] = H.n();
  timing.record(name, seconds_since(t0));
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  return emit(r, o.format, o.out_path, out, err);
}

int run_corpus_command(const Options& o, const std::string& command, std::ostream& out,
                       std::ostream& err) {
  Timing timing(o.timing, err);
  if (o.families.empty()) throw ContractError("corpus: empty family list (use --family)");
  const std::size_t ceiling = term_ceiling_from_env();
  std::vector<CorpusEntry> corpus;
  for (const auto& fam : o.families) {
    if (fam == "mixed") {
      for (auto& e : default_corpus(o.seed)) corpus.push_back(std::move(e));
      continue;
    }
    for (int n : o.ns) {
      CorpusDescriptor d;
      d.family = parse_family(fam);
      d.n = n;
      d.count = o.count;
      d.seed = o.seed;
      for (auto& e : gen_corpus(d)) corpus.push_back(std::move(e));
    }
  }
  std::stable_sort(corpus.begin(), corpus.end(),
                   [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  if (!o.emit_dir.empty()) {
    std::filesystem::create_directories(o.emit_dir);
    for (const auto& e : corpus) {
      std::ofstream f(std::filesystem::path(o.emit_dir) / (e.id + ".json"), std::ios::binary);
      if (!f) throw ParseError("cannot write map files into '" + o.emit_dir + "'");
      f << map_file_to_json(map_file_from_entry(e)).dump(2) << "\n";
    }
  }

  const auto t0 = Clock::now();
  std::vector<InstanceOutcome> outcomes;
  if (o.suite != "none") {
    outcomes = run_parallel(corpus, o.suite, o.degree, o.xi_degree, o.m_max, ceiling);
  } else {
    for (const auto& e : corpus) outcomes.push_back({e.id, to_string(e.family), e.H.n(), {}, {}, {}, false, 0});
  }

  Report r;
  r.command = command;
  r.input_digest = input_digest(command);
  Json instances = Json::array();
  std::size_t passed = 0;
  std::size_t skipped = 0;
  bool guard_hit = false;
  for (const auto& oc : outcomes) {
    timing.record(oc.id, oc.seconds);
    Json failed = Json::array();
    const CheckResult* first_fail = nullptr;
    for (const auto& c : oc.checks) {
      if (c.pass) continue;
      failed.push_back(c.name);
      if (!first_fail) first_fail = &c;
    }
    instances.push_back({{"id", oc.id},
                         {"family", oc.family},
                         {"n", oc.n},
                         {"checks", oc.checks.size()},
                         {"failed", failed},
                         {"skipped", oc.skipped ? Json(*oc.skipped) : Json(nullptr)},
                         {"error", oc.error ? Json(*oc.error) : Json(nullptr)}});
    if (oc.skipped) ++skipped;
    if (o.suite == "none" || oc.skipped) continue;
    guard_hit = guard_hit || oc.resource_guard;
    CheckResult c;
    c.name = oc.id;
    c.pass = !oc.error && first_fail == nullptr;
    if (oc.error) {
      c.detail = "error: " + *oc.error;
    } else if (first_fail) {
      c.detail = first_fail->name + (first_fail->detail.empty() ? "" : " (" + first_fail->detail + ")");
      c.witness = first_fail->witness;
    } else {
      c.detail = std::to_string(oc.checks.size()) + " checks";
    }
    if (c.pass) ++passed;
    r.checks.push_back(std::move(c));
  }
  r.data["suite"] = o.suite;
  r.data["instances"] = instances;
  r.data["summary"] = {{"instances", outcomes.size()},
                       {"passed", passed},
                       {"skipped", skipped},
                       {"failed", r.checks.size() - passed}};
  if (guard_hit) {
    r.error = "term ceiling " + std::to_string(ceiling) + " exceeded on at least one instance";
    r.exit_code = kExitResourceGuard;
  }
  timing.record("corpus", seconds_since(t0));
  return emit(r, o.format, o.out_path, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Formal inversion and Weyl-algebra identity checks for polynomial maps", "agcalc"};
  app.require_subcommand(1);

  CLI::App* inv = app.add_subcommand("invert", "Invert F = z - H to a given degree");
  inv->add_option("map", o.map_path, "Map file (JSON)")->required();
  inv->add_option("--degree,-D", o.degree, "Truncation degree D")->check(CLI::Range(1, 100));
  inv->add_option("--method", o.method, "Inversion method")
      ->check(CLI::IsMember({"fixedpoint", "ag", "lambda", "all"}));
  add_output_flags(inv, o);

  CLI::App* ver = app.add_subcommand("verify", "Run the inversion identity suite on a map");
  ver->add_option("map", o.map_path, "Map file (JSON)")->required();
  ver->add_option("--degree,-D", o.degree, "Truncation degree D")->check(CLI::Range(1, 100));
  ver->add_option("--xi-degree,-K", o.xi_degree, "xi-degree window K")->check(CLI::Range(0, 100));
  ver->add_option("--q", o.q, "Weight polynomial q(z)");
  add_output_flags(ver, o);

  CLI::App* lab = app.add_subcommand("lab", "Nilpotency, vanishing scans and deformation checks");
  lab->add_option("map", o.map_path, "Map file (JSON)")->required();
  lab->add_option("--m-max,-M", o.m_max, "Largest m in the scans")->check(CLI::Range(1, 64));
  lab->add_option("--checks", o.checks, "Which checks to run")
      ->check(CLI::IsMember({"nilpotent", "scan0", "scan1", "equiv", "all"}));
  add_output_flags(lab, o);

  CLI::App* cor = app.add_subcommand("corpus", "Generate a corpus and run a suite over it");
  cor->add_option("--family", o.families,
                  "triangular, conjugated-cubic, control, series or mixed (repeatable)");
  cor->add_option("--n", o.ns, "Dimensions (repeatable)")->check(CLI::Range(1, 4));
  cor->add_option("--count", o.count, "Instances per family and dimension");
  cor->add_option("--seed", o.seed, "Generator seed");
  cor->add_option("--run", o.suite, "Suite to run")
      ->check(CLI::IsMember({"invert-all", "verify", "lab", "none"}));
  cor->add_option("--degree,-D", o.degree, "Degree for invert-all and verify")
      ->check(CLI::Range(1, 100));
  cor->add_option("--xi-degree,-K", o.xi_degree, "xi-degree window for verify")
      ->check(CLI::Range(0, 100));
  cor->add_option("--m-max,-M", o.m_max, "Largest m for lab")->check(CLI::Range(1, 64));
  cor->add_option("--emit-dir", o.emit_dir, "Write every instance as a map file here");
  add_output_flags(cor, o);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const std::string command = join(args);
  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == cor) return run_corpus_command(o, command, out, err);
    return run_map_command(sub->get_name(), o, command, out, err);
  } catch (const ResourceGuardError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResourceGuard;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace agcalc::cli
