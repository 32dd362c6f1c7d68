#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agcalc/cli.hpp"
#include "agcalc/corpus.hpp"
#include "agcalc/errors.hpp"
#include "agcalc/map_file.hpp"
#include "oracles.hpp"

using namespace agcalc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("agcalc-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kCatalan = R"({"n": 1, "name": "catalan", "components": [[{"coeff": "1", "exps": [2]}]]})";
const char* kTri = R"({"n": 2, "name": "tri", "family": "triangular",
  "components": [[{"coeff": "1", "exps": [0, 2]}], []],
  "known_inverse": [[{"coeff": "1", "exps": [1, 0]}, {"coeff": "1", "exps": [0, 2]}],
                    [{"coeff": "1", "exps": [0, 1]}]],
  "known_inverse_t_degree": 0})";
const char* kTriWrong = R"({"n": 2, "name": "tri", "family": "triangular",
  "components": [[{"coeff": "1", "exps": [0, 2]}], []],
  "known_inverse": [[{"coeff": "1", "exps": [1, 0]}, {"coeff": "-1", "exps": [0, 2]}],
                    [{"coeff": "1", "exps": [0, 1]}]],
  "known_inverse_t_degree": 0})";

}  // namespace

TEST_CASE("map file parsing") {
  const MapFile m = parse_map_file(kTri);
  CHECK(m.name == "tri");
  CHECK(m.family == "triangular");
  CHECK(m.H.n() == 2);
  CHECK(m.H[0].poly() == oracle::zp("z2^2", 2));
  REQUIRE(m.known_inverse.has_value());
  CHECK(m.known_inverse_t_degree == 0);
  const MapFile back = map_file_from_json(map_file_to_json(m));
  CHECK(back.H == m.H);
  CHECK(back.known_inverse == m.known_inverse);

  CHECK_THROWS_AS(parse_map_file("{"), ParseError);
  CHECK_THROWS_AS(parse_map_file(R"({"n": 1, "components": [[{"coeff": "1/0", "exps": [2]}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_map_file(R"({"n": 1, "components": [[{"coeff": "1", "exps": [2, 1]}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_map_file(R"({"n": 1, "colour": 3, "components": [[]]})"), ParseError);
  CHECK_THROWS_AS(parse_map_file(R"({"n": 1, "components": [[{"coeff": "1", "exps": [1]}]]})"),
                  PreconditionError);
  CHECK_THROWS_AS(
      parse_map_file(R"({"n": 1, "trunc": 3, "components": [[{"coeff": "1", "exps": [5]}]]})"),
      ParseError);
  const MapFile t =
      parse_map_file(R"({"n": 1, "trunc": 6, "components": [[{"coeff": "2/4", "exps": [3]}]]})");
  CHECK(t.H[0].trunc() == 6);
  CHECK(t.H[0].poly() == oracle::zp("1/2*z^3", 1));
}

TEST_CASE("corpus entries survive the map file format") {
  for (const CorpusEntry& e : default_corpus(3)) {
    const MapFile m = map_file_from_json(map_file_to_json(map_file_from_entry(e)));
    CHECK(m.H == e.H);
    CHECK(m.known_inverse == e.known_inverse);
    CHECK(m.known_inverse_t_degree == e.known_inverse_t_degree);
  }
}

TEST_CASE("digest is stable") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(input_digest("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("invert command") {
  TempDir dir;
  const std::string path = dir.write("catalan.json", kCatalan);
  const Run r = run({"invert", path, "-D", "6", "--format", "json"});
  CHECK(r.code == cli::kExitPass);
  const Json j = Json::parse(r.out);
  CHECK(j["data"]["G"]["fixed_point"][0] == "z1 + z1^2 + 2*z1^3 + 5*z1^4 + 14*z1^5 + 42*z1^6");
  CHECK(j["data"]["G"]["lambda_series"] == j["data"]["G"]["fixed_point"]);
  CHECK(j["pass"] == true);
  CHECK(j["exit_code"] == 0);

  const Run text = run({"invert", path, "-D", "4"});
  CHECK(text.code == 0);
  CHECK(text.out.find("result: PASS") != std::string::npos);

  const Run one = run({"invert", path, "-D", "4", "--method", "lambda", "--format", "json"});
  CHECK(one.code == 0);
  CHECK(Json::parse(one.out)["data"]["G"].size() == 1);
}

TEST_CASE("reports are deterministic and round trip") {
  TempDir dir;
  const std::string path = dir.write("tri.json", kTri);
  for (const char* cmd : {"invert", "verify", "lab"}) {
    CAPTURE(cmd);
    const Run a = run({cmd, path, "--format", "json"});
    const Run a2 = run({cmd, path, "--format", "json"});
    const Run b = run({cmd, path, "--format", "json", "--timing"});
    CHECK(a.code == 0);
    CHECK(a.out == a2.out);
    CHECK(a.err.empty());
    CHECK(b.err.find("timing") != std::string::npos);
    const Json j = Json::parse(a.out);
    Json jb = Json::parse(b.out);
    jb["command"] = j["command"];
    CHECK(jb == j);
    const Report rep = report_from_json(j);
    CHECK(report_to_json(rep) == j);
    CHECK(rep.input_digest.rfind("fnv1a64:", 0) == 0);
    CHECK(!report_to_text(rep).empty());
  }
  CHECK_THROWS_AS(report_from_json(Json::parse(R"({"command": "x"})")), ParseError);
}

TEST_CASE("--out writes the JSON report") {
  TempDir dir;
  const std::string path = dir.write("catalan.json", kCatalan);
  const std::string out = (dir.path / "report.json").string();
  const Run r = run({"invert", path, "-D", "3", "--out", out});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(report_from_json(Json::parse(ss.str())).pass);
}

TEST_CASE("verification failure exits 1") {
  TempDir dir;
  const std::string path = dir.write("wrong.json", kTriWrong);
  const Run r = run({"lab", path, "--format", "json"});
  CHECK(r.code == cli::kExitVerificationFailure);
  const Json j = Json::parse(r.out);
  CHECK(j["pass"] == false);
  bool witnessed = false;
  for (const auto& c : j["checks"])
    if (c["pass"] == false && !c["witness"].is_null()) witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("input errors exit 2") {
  TempDir dir;
  const std::string bad = dir.write("bad.json", R"({"n": 1, "components": [[{"coeff": "1/0", "exps": [2]}]]})");
  const std::string low = dir.write("low.json", R"({"n": 1, "components": [[{"coeff": "1", "exps": [1]}]]})");
  const std::string shallow =
      dir.write("shallow.json", R"({"n": 1, "trunc": 4, "components": [[{"coeff": "1", "exps": [2]}]]})");
  CHECK(run({"invert", bad}).code == cli::kExitInputError);
  CHECK(run({"invert", low}).code == cli::kExitInputError);
  CHECK(run({"invert", (dir.path / "missing.json").string()}).code == cli::kExitInputError);
  CHECK(run({"invert", shallow, "-D", "6"}).code == cli::kExitInputError);
  CHECK(run({"invert", shallow, "-D", "4"}).code == cli::kExitPass);
  CHECK(run({"lab", shallow}).code == cli::kExitInputError);
  CHECK(run({"frobnicate"}).code == cli::kExitInputError);
  CHECK(run({"invert", shallow, "-D", "0"}).code == cli::kExitInputError);
  CHECK(run({"corpus", "--family", ""}).code == cli::kExitInputError);
  CHECK(run({"corpus", "--family", "cubic"}).code == cli::kExitInputError);
  const Run r = run({"invert", bad});
  CHECK(r.err.find("1/0") != std::string::npos);
}

TEST_CASE("K above D is capped with a warning") {
  TempDir dir;
  const std::string path = dir.write("tri.json", kTri);
  const Run r = run({"verify", path, "-D", "3", "-K", "5", "--format", "json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["warnings"].size() == 1);
  CHECK(j["warnings"][0].get<std::string>().find("K") != std::string::npos);
}

TEST_CASE("resource guard exits 3 with a partial report") {
  TempDir dir;
  CorpusDescriptor d;
  d.family = Family::ConjugatedCubic;
  d.n = 3;
  d.count = 1;
  const std::string path =
      dir.write("big.json", map_file_to_json(map_file_from_entry(gen_corpus(d).front())).dump());
  setenv("AGCALC_TERM_CEILING", "50", 1);
  const Run r = run({"lab", path, "--checks", "scan0", "--format", "json"});
  unsetenv("AGCALC_TERM_CEILING");
  CHECK(r.code == cli::kExitResourceGuard);
  const Json j = Json::parse(r.out);
  CHECK(j["exit_code"] == 3);
  CHECK(j["error"].is_string());

  setenv("AGCALC_TERM_CEILING", "abc", 1);
  CHECK(run({"lab", path}).code == cli::kExitInputError);
  unsetenv("AGCALC_TERM_CEILING");
}

TEST_CASE("corpus command") {
  const Run r = run({"corpus", "--family", "mixed", "--n", "2", "--count", "2", "--format", "json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["checks"].size() >= 4);
  const Run again = run({"corpus", "--family", "mixed", "--n", "2", "--count", "2", "--format", "json"});
  CHECK(again.out == r.out);

  TempDir dir;
  const Run emit = run({"corpus", "--family", "triangular", "--n", "2", "--count", "2", "--run", "none",
                        "--emit-dir", dir.path.string()});
  CHECK(emit.code == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    ++files;
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK_NOTHROW(parse_map_file(ss.str()));
  }
  CHECK(files == 2);

  CHECK(run({"corpus", "--family", "control", "--n", "2", "--count", "2", "--run", "lab"}).code == 0);
  CHECK(run({"corpus", "--family", "series", "--n", "1", "--count", "2", "--run", "verify", "-D", "5"})
            .code == 0);
}
