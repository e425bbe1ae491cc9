#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rankjump/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace rankjump;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(RANKJUMP_SOURCE_DIR) / "configs";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("rankjump-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

JumpOptions quick_options(std::size_t count) {
  JumpOptions o;
  o.budget.x0_height = 4;
  o.budget.param_height = 3;
  o.budget.count = count;
  o.timestamp = "2024-01-01T00:00:00Z";
  return o;
}

std::vector<CertificateRecord> records_of(const std::string& jsonl) {
  std::vector<CertificateRecord> out;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(parse_record(line));
  return out;
}

int run_cli(const std::string& args, const fs::path& out_file) {
  const std::string cmd =
      std::string(RANKJUMP_CLI) + " " + args + " > " + out_file.string() + " 2> " + out_file.string() + ".err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config files parse") {
  SurfaceConfig c = load_config(kConfigs / "congruent.conf");
  CHECK(c.label == "congruent");
  REQUIRE(std::holds_alternative<TwistFamily>(c.definition));
  CHECK(std::get<TwistFamily>(c.definition).g == RatPoly{0, 1});
  CHECK(c.surface().canonical_string() == "twist;f=[0,-1,0,1];g=[0,1]");

  SurfaceConfig m = load_config(kConfigs / "mordell.conf");
  REQUIRE(std::holds_alternative<KMFamily>(m.definition));
  CHECK(std::get<KMFamily>(m.definition).a[0] == RatPoly{0, 1});
  CHECK(std::get<KMFamily>(m.definition).a[1].is_zero());

  SurfaceConfig w = parse_config_text("kind = weierstrass\nA = -1\nB = 0, 0, 0, 0, 1\n");
  CHECK(std::holds_alternative<WeierstrassQt>(w.definition));

  CHECK(parse_coefficients("[1, 2/3, -4]") == RatPoly{1, Rat(2, 3), -4});
  CHECK(parse_coefficients("1 2  3") == RatPoly{1, 2, 3});
  CHECK_THROWS_AS(parse_coefficients("1, x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coefficients("[1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coefficients(""), std::invalid_argument);
}

TEST_CASE("config errors name the line and field") {
  auto error_of = [](const std::string& text) -> ConfigError {
    try {
      parse_config_text(text, "t.conf");
    } catch (const ConfigError& e) {
      return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError("", 0, "", "");
  };
  ConfigError e1 = error_of("kind = twist\nf = 0, -1, 0, 1\nf = 1\ng = 0, 1\n");
  CHECK(e1.line == 3);
  CHECK(e1.field == "f");

  ConfigError e2 = error_of("label = x\nf = 1\n");
  CHECK(e2.field == "kind");

  ConfigError e3 = error_of("kind = twist\nf = 0, 0, 0, 1\ng = 0, 1\n");
  CHECK(e3.line == 2);
  CHECK(e3.field == "f");
  CHECK(std::string(e3.what()).find("t.conf:2: field 'f'") == 0);

  ConfigError e4 = error_of("kind = twist\nf = 0, -1, 0, 1\ng = 0, 0, 1\n");
  CHECK(e4.line == 3);
  CHECK(e4.field == "g");

  ConfigError e5 = error_of("kind = km\na3 = 1\nb = 2\n");
  CHECK(e5.line == 3);
  CHECK(e5.field == "b");

  ConfigError e6 = error_of("kind = km\na0 = 0, 1\na3 = 1/x\n");
  CHECK(e6.line == 3);
  CHECK(e6.field == "a3");

  ConfigError e7 = error_of("kind = conic\n");
  CHECK(e7.field == "kind");
  CHECK(e7.line == 1);

  ConfigError e8 = error_of("kind = twist\njust words\n");
  CHECK(e8.line == 2);

  CHECK_THROWS_AS(load_config(kConfigs / "missing.conf"), ConfigError);
}

TEST_CASE("challenge files") {
  CoverChallenge ch = load_challenge(kConfigs / "avoid.txt");
  REQUIRE(ch.covers.size() == 3);
  CHECK(ch.covers[1] == RatPoly{-5, 1});
  std::istringstream bad("0, 1\n0, 0, 1\n");
  try {
    parse_challenge(bad, "a.txt");
    FAIL("square cover accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("records round trip byte for byte") {
  for (const char* cfg : {"congruent.conf", "mordell.conf"}) {
    SurfaceConfig c = load_config(kConfigs / cfg);
    std::ostringstream out, log;
    CHECK(cmd_jump(c, quick_options(5), out, log) == kExitOk);
    std::istringstream in(out.str());
    std::size_t n = 0;
    for (std::string line; std::getline(in, line); ++n) {
      CertificateRecord r = parse_record(line);
      CHECK(serialize(r) == line);
      CHECK(r.version == kEngineVersion);
      CHECK(r.timestamp == "2024-01-01T00:00:00Z");
      CHECK(r.verified);
      CHECK(r.certificate.surface_id == surface_id(c.surface()));
      CHECK(verify_certificate(c.surface(), r.certificate).ok);
    }
    CHECK(n == 5);
  }
  CHECK_THROWS_AS(parse_record("{\"version\": 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record("[]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record("{}"), std::invalid_argument);
}

TEST_CASE("jump output is deterministic") {
  SurfaceConfig c = load_config(kConfigs / "congruent.conf");
  std::ostringstream a, b, log;
  JumpOptions o = quick_options(20);
  cmd_jump(c, o, a, log);
  o.budget.threads = 3;
  cmd_jump(c, o, b, log);
  // The thread count is not part of the record.
  CHECK(a.str() == b.str());

  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(default_timestamp() == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("store appends only new fibres and detects tampering") {
  TempDir dir("store");
  SurfaceConfig c = load_config(kConfigs / "congruent.conf");
  std::ostringstream out, log;
  JumpOptions o = quick_options(4);
  o.store = dir.path;
  CHECK(cmd_jump(c, o, out, log) == kExitOk);
  const fs::path file = dir.path / (surface_id(c.surface()) + ".jsonl");
  REQUIRE(fs::exists(file));
  const std::string first = read_file(file);
  CHECK(records_of(first).size() == 4);

  // Same run again: nothing new.
  std::ostringstream out2;
  cmd_jump(c, o, out2, log);
  CHECK(read_file(file) == first);

  // Larger run: the old lines stay, new fibres are appended.
  o.budget.count = 7;
  std::ostringstream out3;
  cmd_jump(c, o, out3, log);
  const std::string grown = read_file(file);
  CHECK(grown.rfind(first, 0) == 0);
  CHECK(records_of(grown).size() == 7);

  Store store(dir.path);
  CHECK(store.lines().size() == 7);
  CHECK(store.append(records_of(grown)) == 0);

  std::ostringstream report;
  StoreVerification ok = verify_store(dir.path, report);
  CHECK(ok.passed == 7);
  CHECK(ok.failed == 0);
  CHECK(cmd_verify(dir.path, report) == kExitOk);

  // Tamper with one point and the claimed bound of another; add garbage.
  auto recs = records_of(grown);
  recs[1].certificate.points.front().point.y += 1;
  recs[2].certificate.claimed_rank_lower_bound += 1;
  std::string tampered;
  for (const auto& r : recs) tampered += serialize(r) + "\n";
  tampered += "not json\n";
  write_file(file, tampered);

  std::ostringstream report2;
  StoreVerification bad = verify_store(dir.path, report2);
  CHECK(bad.passed == 5);
  CHECK(bad.failed == 2);
  CHECK(bad.corrupt == 1);
  CHECK(report2.str().find("not on the specialized curve") != std::string::npos);
  CHECK(report2.str().find("claimed bound") != std::string::npos);
  CHECK(cmd_verify(dir.path, report2) == kExitVerifyFailed);

  // A record filed under the wrong surface is rejected.
  fs::remove(file);
  write_file(dir.path / "0123456789abcdef.jsonl", serialize(recs[0]) + "\n");
  std::ostringstream report3;
  CHECK(verify_store(dir.path, report3).failed == 1);
}

TEST_CASE("census table") {
  Surface s = load_config(kConfigs / "congruent.conf").surface();
  auto rows = census_table(s, 12);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].classes == 0);
  CHECK(rows[0].fibres == 0);
  CHECK(rows[0].jumps == 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].height == i + 1);
    CHECK(rows[i].classes == field_census(s, rows[i].height).distinct());
    if (i) {
      CHECK(rows[i].classes >= rows[i - 1].classes);
      CHECK(rows[i].fibres >= rows[i - 1].fibres);
      CHECK(rows[i].jumps >= rows[i - 1].jumps);
    }
  }
  CHECK(rows[5].jumps > 0);  // t0 = 6
  std::ostringstream out;
  CHECK(cmd_census(load_config(kConfigs / "congruent.conf"), 3, 2, 1, out) == kExitOk);
  CHECK(out.str().rfind("height\tclasses\tfibres\tjumps\tthin_ref\n", 0) == 0);
}

TEST_CASE("classify output") {
  std::ostringstream out;
  CHECK(cmd_classify(load_config(kConfigs / "congruent_t2m1.conf"), out) == kExitOk);
  const std::string text = out.str();
  CHECK(text.find("euler number: 12") != std::string::npos);
  CHECK(text.find("2I0*") != std::string::npos);
  CHECK(text.find("shioda-tate bound: 0") != std::string::npos);
  CHECK(text.find("w^2 - y^2 = x^3 - x") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  TempDir dir("cli");
  const fs::path out = dir.path / "out.txt";
  const std::string cfg = (kConfigs / "congruent.conf").string();

  CHECK(run_cli("classify " + cfg, out) == 0);
  CHECK(read_file(out).find("I0*") != std::string::npos);

  write_file(dir.path / "bad.conf", "kind = twist\nf = 0, 0, 0, 1\ng = 0, 1\n");
  CHECK(run_cli("classify " + (dir.path / "bad.conf").string(), out) == 2);
  CHECK(read_file(out.string() + ".err").find("bad.conf:2: field 'f'") != std::string::npos);
  CHECK(run_cli("classify " + (dir.path / "nope.conf").string(), out) == 2);
  CHECK(run_cli("jump " + cfg + " --rank 3", out) == 2);
  CHECK(run_cli("frobnicate", out) == 2);

  const fs::path store = dir.path / "store";
  CHECK(run_cli("jump " + cfg + " --count 3 --x0-height 3 --param-height 2 --timestamp 2024-01-01T00:00:00Z --store " +
                    store.string(),
                out) == 0);
  CHECK(records_of(read_file(out)).size() == 3);
  CHECK(run_cli("jump " + cfg + " --count 1000 --x0-height 2 --param-height 1", out) == 3);
  CHECK(run_cli("jump " + cfg + " --count 2 --x0-height 3 --avoid " + (kConfigs / "avoid.txt").string(), out) == 0);

  CHECK(run_cli("verify " + store.string(), out) == 0);
  CHECK(read_file(out).find("passed 3, failed 0, corrupt 0") != std::string::npos);
  const fs::path file = *fs::directory_iterator(store);
  write_file(file, read_file(file) + "{broken\n");
  CHECK(run_cli("verify " + store.string(), out) == 4);

  CHECK(run_cli("census " + cfg + " --height 4", out) == 0);
  CHECK(run_cli("--help", out) == 0);
}
