#include "rankjump/store.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rankjump {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
  auto pos = s.find('#');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

Json poly_json(const RatPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

RatPoly poly_from_json(const Json& j) {
  std::vector<Rat> c;
  for (const auto& e : j) c.push_back(parse_rat(e.get<std::string>()));
  return RatPoly(std::move(c));
}

Json definition_json(const SurfaceDefinition& d) {
  Json j;
  if (const auto* tw = std::get_if<TwistFamily>(&d)) {
    j["kind"] = "twist";
    j["f"] = poly_json(tw->f);
    j["g"] = poly_json(tw->g);
  } else if (const auto* km = std::get_if<KMFamily>(&d)) {
    j["kind"] = "km";
    for (int i = 0; i < 4; ++i) j["a" + std::to_string(i)] = poly_json(km->a[i]);
  } else {
    const auto& w = std::get<WeierstrassQt>(d);
    j["kind"] = "weierstrass";
    j["A"] = poly_json(w.A);
    j["B"] = poly_json(w.B);
  }
  return j;
}

SurfaceDefinition definition_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "twist") return TwistFamily::make(poly_from_json(j.at("f")), poly_from_json(j.at("g")));
  if (kind == "km") {
    std::array<RatPoly, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = poly_from_json(j.at("a" + std::to_string(i)));
    return KMFamily::make(std::move(a));
  }
  if (kind == "weierstrass") return WeierstrassQt::make(poly_from_json(j.at("A")), poly_from_json(j.at("B")));
  throw std::invalid_argument("unknown surface kind '" + kind + "'");
}

Json point_json(const PointQ& p) {
  if (p.infinity) throw std::invalid_argument("certificate point at infinity");
  return Json{{"x", to_string(p.x)}, {"y", to_string(p.y)}};
}

}  // namespace

ConfigError::ConfigError(std::string src, unsigned ln, std::string fld, const std::string& message)
    : std::invalid_argument(src + (ln ? ":" + std::to_string(ln) : std::string()) +
                            (fld.empty() ? std::string() : ": field '" + fld + "'") + ": " + message),
      source(std::move(src)),
      line(ln),
      field(std::move(fld)) {}

RatPoly parse_coefficients(const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unbalanced '['");
    s = s.substr(1, s.size() - 2);
  }
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<Rat> coeffs;
  for (std::string tok; in >> tok;) coeffs.push_back(parse_rat(tok));
  if (coeffs.empty()) throw std::invalid_argument("empty coefficient list");
  return RatPoly(std::move(coeffs));
}

SurfaceConfig parse_config(std::istream& in, const std::string& source) {
  struct Entry {
    std::string value;
    unsigned line;
  };
  std::map<std::string, Entry> entries;
  std::string raw;
  for (unsigned ln = 1; std::getline(in, raw); ++ln) {
    const std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(source, ln, "", "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(source, ln, "", "missing key");
    if (entries.count(key)) throw ConfigError(source, ln, key, "duplicate key");
    entries[key] = {trim(body.substr(eq + 1)), ln};
  }

  auto kind_it = entries.find("kind");
  if (kind_it == entries.end()) throw ConfigError(source, 0, "kind", "missing (twist, km or weierstrass)");
  const std::string kind = kind_it->second.value;
  std::set<std::string> allowed{"kind", "label"};
  if (kind == "twist") {
    allowed.insert({"f", "g"});
  } else if (kind == "km") {
    allowed.insert({"a0", "a1", "a2", "a3"});
  } else if (kind == "weierstrass") {
    allowed.insert({"A", "B"});
  } else {
    throw ConfigError(source, kind_it->second.line, "kind", "unknown kind '" + kind + "'");
  }
  for (const auto& [key, e] : entries)
    if (!allowed.count(key)) throw ConfigError(source, e.line, key, "unknown key for kind " + kind);

  auto poly = [&](const std::string& key, bool required) -> RatPoly {
    auto it = entries.find(key);
    if (it == entries.end()) {
      if (required) throw ConfigError(source, 0, key, "missing");
      return {};
    }
    try {
      return parse_coefficients(it->second.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, it->second.line, key, e.what());
    }
  };
  auto line_of = [&](const std::string& key) {
    auto it = entries.find(key);
    return it == entries.end() ? 0u : it->second.line;
  };

  SurfaceConfig cfg;
  if (auto it = entries.find("label"); it != entries.end()) cfg.label = it->second.value;
  if (kind == "twist") {
    RatPoly f = poly("f", true), g = poly("g", true);
    try {
      cfg.definition = TwistFamily::make(f, g);
    } catch (const NotRationalElliptic& e) {
      const std::string field = std::string(e.what()).find(": g ") != std::string::npos ? "g" : "f";
      throw ConfigError(source, line_of(field), field, e.what());
    }
  } else if (kind == "km") {
    std::array<RatPoly, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = poly("a" + std::to_string(i), i == 3);
    try {
      cfg.definition = KMFamily::make(a);
    } catch (const NotRationalElliptic& e) {
      std::string field = "a3";
      for (int i = 0; i < 4; ++i)
        if (a[i].degree() > 2) field = "a" + std::to_string(i);
      throw ConfigError(source, line_of(field), field, e.what());
    }
  } else {
    RatPoly A = poly("A", true), B = poly("B", true);
    try {
      cfg.definition = WeierstrassQt::make(A, B);
    } catch (const NotRationalElliptic& e) {
      const std::string field = A.degree() > 4 ? "A" : "B";
      throw ConfigError(source, line_of(field), field, e.what());
    }
  }
  return cfg;
}

SurfaceConfig parse_config_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_config(in, source);
}

SurfaceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
  return parse_config(in, path.string());
}

CoverChallenge parse_challenge(std::istream& in, const std::string& source) {
  std::vector<RatPoly> covers;
  std::string raw;
  for (unsigned ln = 1; std::getline(in, raw); ++ln) {
    const std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;
    try {
      covers.push_back(parse_coefficients(body));
      CoverChallenge::make({covers.back()});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, ln, "", e.what());
    }
  }
  return CoverChallenge::make(std::move(covers));
}

CoverChallenge load_challenge(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
  return parse_challenge(in, path.string());
}

std::string default_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    long long v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    if (auto [p, ec] = std::from_chars(env, end, v); ec == std::errc() && p == end) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string serialize(const CertificateRecord& r) {
  const auto& c = r.certificate;
  Json j;
  j["version"] = r.version;
  Json surface;
  surface["id"] = c.surface_id;
  surface["label"] = r.label;
  surface["definition"] = definition_json(r.definition);
  j["surface"] = std::move(surface);
  j["budget"] = Json{{"x0_height", r.budget.x0_height},
                     {"param_height", r.budget.param_height},
                     {"count", r.budget.count},
                     {"naive_bound", r.budget.naive_bound},
                     {"t0_height", r.budget.t0_height}};
  j["timestamp"] = r.timestamp;
  j["t0"] = to_string(c.t0);
  j["generic_rank"] = Json{{"bound", c.generic_rank_bound}, {"exact", c.generic_rank_exact}};
  j["curve"] = Json{{"A", to_string(c.A)}, {"B", to_string(c.B)}};
  Json pts = Json::array();
  for (const auto& p : c.points) {
    Json e;
    e["x0"] = to_string(p.x0);
    e["fibre"] = Json{{"x", to_string(p.fibre_x)}, {"y", to_string(p.fibre_y)}};
    e["point"] = point_json(p.point);
    e["torsion"] = p.torsion.torsion;
    e["height"] = Json{{"value", format_double(p.height.value)},
                       {"error", format_double(p.height.error)},
                       {"local", format_double(p.height.local_value)},
                       {"doubling", format_double(p.height.doubling_value)},
                       {"digits", p.height.digits},
                       {"method", p.height.method}};
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  Json gram = Json::array();
  for (const auto& row : c.regulator.gram) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(format_double(v));
    gram.push_back(std::move(jr));
  }
  j["regulator"] = Json{{"determinant", format_double(c.regulator.determinant)},
                        {"error", format_double(c.regulator.error)},
                        {"verdict", to_string(c.regulator.verdict)},
                        {"relation", c.regulator.relation},
                        {"gram", std::move(gram)}};
  j["claimed_rank_lower_bound"] = c.claimed_rank_lower_bound;
  j["verified"] = r.verified;
  return j.dump();
}

CertificateRecord parse_record(const std::string& line) {
  try {
    const Json j = Json::parse(line);
    CertificateRecord r;
    auto& c = r.certificate;
    r.version = j.at("version").get<std::string>();
    const Json& surface = j.at("surface");
    c.surface_id = surface.at("id").get<std::string>();
    r.label = surface.at("label").get<std::string>();
    r.definition = definition_from_json(surface.at("definition"));
    const Json& b = j.at("budget");
    r.budget.x0_height = b.at("x0_height").get<unsigned>();
    r.budget.param_height = b.at("param_height").get<unsigned>();
    r.budget.count = b.at("count").get<std::size_t>();
    r.budget.naive_bound = b.at("naive_bound").get<unsigned>();
    r.budget.t0_height = b.at("t0_height").get<unsigned>();
    r.timestamp = j.at("timestamp").get<std::string>();
    c.t0 = parse_rat(j.at("t0").get<std::string>());
    c.generic_rank_bound = j.at("generic_rank").at("bound").get<int>();
    c.generic_rank_exact = j.at("generic_rank").at("exact").get<bool>();
    c.A = parse_rat(j.at("curve").at("A").get<std::string>());
    c.B = parse_rat(j.at("curve").at("B").get<std::string>());
    for (const auto& e : j.at("points")) {
      CertifiedPoint p;
      p.x0 = parse_rat(e.at("x0").get<std::string>());
      p.fibre_x = parse_rat(e.at("fibre").at("x").get<std::string>());
      p.fibre_y = parse_rat(e.at("fibre").at("y").get<std::string>());
      p.point = PointQ::affine(parse_rat(e.at("point").at("x").get<std::string>()),
                               parse_rat(e.at("point").at("y").get<std::string>()));
      p.torsion.torsion = e.at("torsion").get<bool>();
      const Json& h = e.at("height");
      p.height.value = parse_double(h.at("value").get<std::string>());
      p.height.error = parse_double(h.at("error").get<std::string>());
      p.height.local_value = parse_double(h.at("local").get<std::string>());
      p.height.doubling_value = parse_double(h.at("doubling").get<std::string>());
      p.height.digits = h.at("digits").get<unsigned>();
      p.height.method = h.at("method").get<std::string>();
      c.points.push_back(std::move(p));
    }
    const Json& reg = j.at("regulator");
    c.regulator.determinant = parse_double(reg.at("determinant").get<std::string>());
    c.regulator.error = parse_double(reg.at("error").get<std::string>());
    const std::string verdict = reg.at("verdict").get<std::string>();
    bool known = false;
    for (auto v : {RegulatorVerdict::Independent, RegulatorVerdict::Dependent, RegulatorVerdict::Inconclusive})
      if (to_string(v) == verdict) {
        c.regulator.verdict = v;
        known = true;
      }
    if (!known) throw std::invalid_argument("unknown regulator verdict '" + verdict + "'");
    c.regulator.relation = reg.at("relation").get<std::vector<long>>();
    for (const auto& row : reg.at("gram")) {
      std::vector<double> r2;
      for (const auto& v : row) r2.push_back(parse_double(v.get<std::string>()));
      c.regulator.gram.push_back(std::move(r2));
    }
    for (const auto& p : c.points) c.regulator.heights.push_back(p.height);
    c.claimed_rank_lower_bound = j.at("claimed_rank_lower_bound").get<int>();
    r.verified = j.at("verified").get<bool>();
    return r;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path Store::file_for(const std::string& surface_id) const { return dir_ / (surface_id + ".jsonl"); }

std::size_t Store::append(const std::vector<CertificateRecord>& records) {
  std::lock_guard lock(write_mutex_);
  std::map<std::string, std::set<Rat>> known;
  auto load = [&](const std::string& id) -> std::set<Rat>& {
    auto [it, fresh] = known.try_emplace(id);
    if (fresh) {
      std::ifstream in(file_for(id));
      for (std::string line; std::getline(in, line);) {
        if (trim(line).empty()) continue;
        try {
          it->second.insert(parse_record(line).certificate.t0);
        } catch (const std::exception&) {
          // corrupt lines are left for verify to report
        }
      }
    }
    return it->second;
  };
  std::size_t written = 0;
  for (const auto& r : records) {
    auto& seen = load(r.certificate.surface_id);
    if (!seen.insert(r.certificate.t0).second) continue;
    std::ofstream out(file_for(r.certificate.surface_id), std::ios::app);
    out << serialize(r) << '\n';
    if (!out) throw std::runtime_error("write failed: " + file_for(r.certificate.surface_id).string());
    ++written;
  }
  return written;
}

std::vector<Store::Line> Store::lines() const {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir_))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Line> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
      ++n;
      if (!trim(line).empty()) out.push_back({f, n, line});
    }
  }
  return out;
}

}  // namespace rankjump
