#include "rankjump/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rankjump {

namespace {

std::string describe(const SurfaceDefinition& d) {
  if (const auto* tw = std::get_if<TwistFamily>(&d))
    return "twist g(t) y^2 = f(x), f = " + tw->f.str("x") + ", g = " + tw->g.str("t");
  if (const auto* km = std::get_if<KMFamily>(&d)) {
    std::string s = "y^2 = sum a_i(t) x^i";
    for (int i = 0; i < 4; ++i) s += ", a" + std::to_string(i) + " = " + km->a[i].str("t");
    return s;
  }
  const auto& w = std::get<WeierstrassQt>(d);
  return "y^2 = x^3 + A(t) x + B(t), A = " + w.A.str("t") + ", B = " + w.B.str("t");
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string valuation_str(int v) { return v < 0 ? "inf" : std::to_string(v); }

}  // namespace

int cmd_classify(const SurfaceConfig& cfg, std::ostream& out) {
  const Surface s = cfg.surface();
  const auto& w = s.weierstrass.model;
  if (!cfg.label.empty()) out << "label: " << cfg.label << '\n';
  out << "surface: " << describe(s.definition) << '\n';
  out << "weierstrass: y^2 = x^3 + A(t) x + B(t), A = " << w.A.str("t") << ", B = " << w.B.str("t") << '\n';
  out << "surface id: " << surface_id(s) << "\n\n";

  out << pad("place", 20) << pad("type", 8) << pad("m_v", 5) << pad("reduced", 9) << "v(A) v(B) v(D)\n";
  for (const auto& f : s.fibres.fibres) {
    out << pad(f.place.str("t"), 20) << pad(f.type.str(), 8) << pad(std::to_string(f.type.components()), 5)
        << pad(f.type.reduced() ? "yes" : "no", 9) << valuation_str(f.vA) << ' ' << valuation_str(f.vB) << ' '
        << f.vDelta << '\n';
  }
  const int euler = s.fibres.euler_number();
  const int bound = shioda_tate_bound(s.fibres);
  out << '\n';
  out << "configuration: " << s.fibres.configuration() << '\n';
  out << "euler number: " << euler << (euler == 12 ? " (ok)" : " (expected 12)") << '\n';
  out << "non-reduced fibres: " << s.fibres.non_reduced_count() << '\n';
  out << "shioda-tate bound: " << bound << (bound == 0 ? " (generic rank is 0)" : "") << '\n';

  auto twist = is_twist_case(w);
  if (twist)
    out << "twist case: yes, f = " << twist->f.str("x") << ", g = " << twist->g.str("t") << '\n';
  else
    out << "twist case: no\n";
  std::string chatelet;
  if (const auto* tw = std::get_if<TwistFamily>(&s.definition); tw && tw->g.degree() == 2)
    chatelet = to_chatelet(*tw).str();
  else if (twist && twist->g.degree() == 2)
    chatelet = to_chatelet(*twist).str();
  if (!chatelet.empty()) out << "chatelet: " << chatelet << '\n';

  out << "summary: " << s.fibres.configuration() << ", generic rank bound " << bound;
  if (!chatelet.empty()) out << ", chatelet: " << chatelet;
  out << '\n';
  return kExitOk;
}

int cmd_jump(const SurfaceConfig& cfg, const JumpOptions& opts, std::ostream& out, std::ostream& log) {
  if (opts.rank != 1 && opts.rank != 2) throw std::invalid_argument("--rank must be 1 or 2");
  const Surface s = cfg.surface();
  JumpResult res = opts.rank == 2 ? jump2(s, opts.budget, opts.avoid) : jump1(s, opts.budget, opts.avoid);
  const std::string stamp = opts.timestamp.empty() ? default_timestamp() : opts.timestamp;

  std::vector<CertificateRecord> records;
  for (auto& c : res.certificates) {
    CertificateRecord r;
    r.label = cfg.label;
    r.definition = cfg.definition;
    r.budget = opts.budget;
    r.timestamp = stamp;
    r.verified = verify_certificate(s, c).ok;
    r.certificate = std::move(c);
    out << serialize(r) << '\n';
    records.push_back(std::move(r));
  }
  out.flush();
  for (const auto& line : res.log) log << "rejected: " << line << '\n';
  log << "certificates: " << records.size() << '\n';
  if (opts.store) {
    Store store(*opts.store);
    const std::size_t added = store.append(records);
    log << "store: " << added << " new record(s) in " << store.file_for(surface_id(s)).string() << '\n';
  }
  if (res.exhausted) {
    log << "budget exhausted before " << opts.budget.count << " certificates\n";
    return kExitExhausted;
  }
  return kExitOk;
}

std::vector<CensusRow> census_table(const Surface& s, unsigned max_height, unsigned param_height,
                                    unsigned threads) {
  std::vector<CensusRow> rows;
  if (max_height == 0) return rows;
  const Census census = field_census(s, max_height);

  Budget b;
  b.x0_height = max_height;
  b.param_height = param_height;
  b.t0_height = max_height;
  b.count = static_cast<std::size_t>(-1);
  b.threads = threads;
  std::vector<Int> jump_heights;
  for (const auto& c : jump1(s, b).certificates) jump_heights.push_back(naive_height(c.t0));

  for (unsigned h = 1; h <= max_height; ++h) {
    CensusRow row;
    row.height = h;
    for (const auto& e : census.classes) {
      std::size_t n = 0;
      for (const auto& x : e.x0s)
        if (naive_height(x) <= h) ++n;
      if (n) ++row.classes;
      row.fibres += n;
    }
    for (const auto& jh : jump_heights)
      if (jh <= h) ++row.jumps;
    row.thin_reference = std::pow(static_cast<double>(h), 1.5) * std::log(static_cast<double>(h));
    rows.push_back(row);
  }
  return rows;
}

int cmd_census(const SurfaceConfig& cfg, unsigned max_height, unsigned param_height, unsigned threads,
               std::ostream& out) {
  const Surface s = cfg.surface();
  out << "height\tclasses\tfibres\tjumps\tthin_ref\n";
  for (const auto& r : census_table(s, max_height, param_height, threads)) {
    char ref[32];
    std::snprintf(ref, sizeof ref, "%.3f", r.thin_reference);
    out << r.height << '\t' << r.classes << '\t' << r.fibres << '\t' << r.jumps << '\t' << ref << '\n';
  }
  return kExitOk;
}

StoreVerification verify_store(const std::filesystem::path& dir, std::ostream& out) {
  if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("not a store directory: " + dir.string());
  StoreVerification v;
  for (const auto& line : Store(dir).lines()) {
    const std::string where = line.file.filename().string() + ":" + std::to_string(line.number);
    CertificateRecord r;
    try {
      r = parse_record(line.text);
    } catch (const std::exception& e) {
      ++v.corrupt;
      out << "CORRUPT " << where << ": " << e.what() << '\n';
      continue;
    }
    VerificationReport rep;
    try {
      rep = verify_certificate(Surface::make(r.definition, r.label), r.certificate);
      if (line.file.stem().string() != r.certificate.surface_id) {
        rep.ok = false;
        rep.failures.push_back("record filed under the wrong surface");
      }
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.failures.push_back(e.what());
    }
    if (rep.ok) {
      ++v.passed;
      out << "PASS " << where << " t0=" << to_string(r.certificate.t0) << '\n';
    } else {
      ++v.failed;
      out << "FAIL " << where << " t0=" << to_string(r.certificate.t0);
      for (const auto& f : rep.failures) out << "; " << f;
      out << '\n';
    }
  }
  out << "passed " << v.passed << ", failed " << v.failed << ", corrupt " << v.corrupt << '\n';
  return v;
}

int cmd_verify(const std::filesystem::path& dir, std::ostream& out) {
  const StoreVerification v = verify_store(dir, out);
  return v.failed + v.corrupt == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace rankjump
