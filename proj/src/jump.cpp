#include "rankjump/jump.hpp"

#include <exception>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace rankjump {

namespace {

struct UnitOutput {
  std::vector<RankJumpCertificate> certificates;
  std::vector<std::string> log;
};

// Runs fn over items in batches of `threads`, merging results in item order.
// merge returns false to stop early.
template <class Item, class Fn, class Merge>
void run_ordered(const std::vector<Item>& items, unsigned threads, Fn fn, Merge merge) {
  const std::size_t batch = std::max(1u, threads);
  for (std::size_t start = 0; start < items.size(); start += batch) {
    const std::size_t end = std::min(items.size(), start + batch);
    std::vector<UnitOutput> outs(end - start);
    if (batch == 1) {
      outs[0] = fn(items[start]);
    } else {
      std::vector<std::exception_ptr> errors(end - start);
      std::vector<std::thread> pool;
      for (std::size_t i = start; i < end; ++i)
        pool.emplace_back([&, i] {
          try {
            outs[i - start] = fn(items[i]);
          } catch (...) {
            errors[i - start] = std::current_exception();
          }
        });
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (auto& o : outs)
      if (!merge(o)) return;
  }
}

bool t0_allowed(const Budget& b, const Rat& t0) { return b.t0_height == 0 || naive_height(t0) <= b.t0_height; }

std::vector<Rat> x0_candidates(unsigned bound) { return rationals_up_to_height(bound); }

RankJumpCertificate make_certificate(const Surface& s, const Specialization& sp,
                                     std::vector<CertifiedPoint> points, RegulatorResult reg) {
  RankJumpCertificate c;
  c.surface_id = surface_id(s);
  c.t0 = sp.t0;
  std::tie(c.generic_rank_bound, c.generic_rank_exact) = generic_rank(s);
  c.A = sp.curve.A();
  c.B = sp.curve.B();
  for (std::size_t i = 0; i < points.size(); ++i) points[i].height = reg.heights.at(i);
  c.points = std::move(points);
  c.regulator = std::move(reg);
  c.claimed_rank_lower_bound =
      (c.generic_rank_exact ? c.generic_rank_bound : 0) + static_cast<int>(c.points.size());
  return c;
}

std::optional<Specialization> try_specialize(const Surface& s, const Rat& t0) {
  try {
    return specialize(s, t0);
  } catch (const SingularSpecialization&) {
    return std::nullopt;
  }
}

std::optional<ConicFibre> try_fibre(const Surface& s, const Rat& x0) {
  try {
    return conic_fibre(s, x0);
  } catch (const DegenerateFibre&) {
    return std::nullopt;
  }
}

// Appends unit output to the result, skipping t0 already emitted; false once the count is reached.
bool merge_into(JumpResult& res, std::set<Rat>& seen, UnitOutput& out, std::size_t count) {
  for (auto& l : out.log) res.log.push_back(std::move(l));
  for (auto& c : out.certificates) {
    if (res.certificates.size() >= count) return false;
    if (!seen.insert(c.t0).second) continue;
    res.certificates.push_back(std::move(c));
  }
  return res.certificates.size() < count;
}

std::string pair_label(const Rat& x0, const Rat& x1, const Rat& t0) {
  return "x0=" + to_string(x0) + " x1=" + to_string(x1) + " t0=" + to_string(t0);
}

Rat fibre_cubic(const Surface& s, const Rat& x) {
  const auto* tw = std::get_if<TwistFamily>(&s.definition);
  if (!tw) throw std::logic_error("twist family expected");
  return tw->f(x);
}

UnitOutput jump2_twist_pair(const Surface& s, const Budget& budget, const CoverChallenge& avoid, const Rat& x0,
                            const Rat& x1) {
  UnitOutput out;
  auto c = try_fibre(s, x0);
  if (!c || !conic_solvable(*c)) return out;
  const auto ratio = rational_sqrt(fibre_cubic(s, x1) / fibre_cubic(s, x0));
  if (!ratio) return out;
  ConicParametrization param(*c, budget.naive_bound);
  std::set<Rat> local;
  for (unsigned h = 1; h <= budget.param_height; ++h)
    for (const auto& m : ConicParametrization::parameters_of_height(h)) {
      auto p = param.at(m);
      if (!p || !avoid.avoids(p->t) || !t0_allowed(budget, p->t) || !local.insert(p->t).second) continue;
      auto sp = try_specialize(s, p->t);
      if (!sp) continue;
      const Rat w1 = p->w * *ratio;
      PointQ P0 = sp->transport(x0, p->w), P1 = sp->transport(x1, w1);
      TorsionVerdict t0v = is_torsion(sp->curve, P0), t1v = is_torsion(sp->curve, P1);
      if (t0v.torsion || t1v.torsion) continue;
      RegulatorResult reg = regulator(sp->curve, {P0, P1});
      if (reg.verdict != RegulatorVerdict::Independent) {
        out.log.push_back(to_string(reg.verdict) + " " + pair_label(x0, x1, p->t));
        // Every t0 on this conic gives a curve isomorphic to the same twist,
        // carrying the pair to the same pair; an exact relation persists.
        if (reg.verdict == RegulatorVerdict::Dependent) return out;
        continue;
      }
      std::vector<CertifiedPoint> pts{{x0, x0, p->w, P0, t0v, {}}, {x1, x1, w1, P1, t1v, {}}};
      out.certificates.push_back(make_certificate(s, *sp, std::move(pts), std::move(reg)));
    }
  return out;
}

UnitOutput jump2_km_pair(const Surface& s, const Budget& budget, const CoverChallenge& avoid, const Rat& x0,
                         const Rat& x1) {
  UnitOutput out;
  auto c0 = try_fibre(s, x0);
  auto c1 = try_fibre(s, x1);
  if (!c0 || !c1 || !conic_solvable(*c0) || !conic_solvable(*c1)) return out;
  if (fibre_product_genus(c0->branch, c1->branch) == ProductGenus::Reducible) return out;
  ConicParametrization param(*c0, budget.naive_bound);
  std::set<Rat> local;
  for (unsigned h = 1; h <= budget.param_height; ++h)
    for (const auto& m : ConicParametrization::parameters_of_height(h)) {
      auto p = param.at(m);
      if (!p || !avoid.avoids(p->t) || !t0_allowed(budget, p->t) || !local.insert(p->t).second) continue;
      if (c1->lhs(p->t) == 0) continue;
      auto w1 = rational_sqrt(c1->rhs(p->t) / c1->lhs(p->t));
      if (!w1 || *w1 == 0 || p->w == 0) continue;
      auto sp = try_specialize(s, p->t);
      if (!sp) continue;
      PointQ P0 = sp->transport(x0, p->w), P1 = sp->transport(x1, *w1);
      TorsionVerdict t0v = is_torsion(sp->curve, P0), t1v = is_torsion(sp->curve, P1);
      if (t0v.torsion || t1v.torsion) continue;
      RegulatorResult reg = regulator(sp->curve, {P0, P1});
      if (reg.verdict != RegulatorVerdict::Independent) {
        out.log.push_back(to_string(reg.verdict) + " " + pair_label(x0, x1, p->t));
        continue;
      }
      std::vector<CertifiedPoint> pts{{x0, x0, p->w, P0, t0v, {}}, {x1, x1, *w1, P1, t1v, {}}};
      out.certificates.push_back(make_certificate(s, *sp, std::move(pts), std::move(reg)));
    }
  return out;
}

}  // namespace

std::string surface_id(const Surface& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s.canonical_string()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::pair<int, bool> generic_rank(const Surface& s) {
  int r = shioda_tate_bound(s.fibres);
  return {r, r == 0};
}

CoverChallenge CoverChallenge::make(std::vector<RatPoly> covers) {
  for (const auto& h : covers) {
    if (h.degree() < 1) throw std::invalid_argument("cover polynomial must be nonconstant: " + h.str());
    if (gcd(h, h.derivative()).degree() > 0)
      throw std::invalid_argument("cover polynomial must be squarefree: " + h.str());
  }
  return CoverChallenge{std::move(covers)};
}

bool CoverChallenge::avoids(const Rat& t0) const {
  for (const auto& h : covers)
    if (is_square(h(t0))) return false;
  return true;
}

JumpResult jump1(const Surface& s, const Budget& budget, const CoverChallenge& avoid) {
  JumpResult res;
  std::set<Rat> seen;
  struct Slot {
    Rat x0;
    unsigned height;
    bool ready = false;
    std::optional<ConicParametrization> param;
  };
  std::vector<Slot> slots;
  for (unsigned h = 1; h <= budget.x0_height; ++h)
    for (const Rat& x : rationals_of_height(h)) slots.push_back({x, h, false, std::nullopt});
  // Level L holds the pairs (x0, m) with max(height(x0), height(m)) = L.
  auto unit_at = [&](unsigned L) {
    return [&, L](std::size_t i) {
      UnitOutput out;
      Slot& slot = slots[i];
      if (!slot.ready) {
        slot.ready = true;
        auto c = try_fibre(s, slot.x0);
        if (c && conic_solvable(*c)) slot.param.emplace(*c, budget.naive_bound);
      }
      if (!slot.param) return out;
      const Rat& x0 = slot.x0;
      const unsigned lo = slot.height == L ? 1 : L, hi = std::min(L, budget.param_height);
      for (unsigned h = lo; h <= hi; ++h)
        for (const auto& m : ConicParametrization::parameters_of_height(h)) {
          auto p = slot.param->at(m);
          if (!p || !avoid.avoids(p->t) || !t0_allowed(budget, p->t)) continue;
          auto sp = try_specialize(s, p->t);
          if (!sp) continue;
          PointQ P = sp->transport(x0, p->w);
          TorsionVerdict tv = is_torsion(sp->curve, P);
          if (tv.torsion) continue;
          RegulatorResult reg = regulator(sp->curve, {P});
          if (reg.verdict != RegulatorVerdict::Independent) {
            out.log.push_back(to_string(reg.verdict) + " x0=" + to_string(x0) + " t0=" + to_string(p->t));
            continue;
          }
          std::vector<CertifiedPoint> pts{{x0, x0, p->w, P, tv, {}}};
          out.certificates.push_back(make_certificate(s, *sp, std::move(pts), std::move(reg)));
        }
      return out;
    };
  };
  const unsigned levels = std::max(budget.x0_height, budget.param_height);
  bool more = res.certificates.size() < budget.count;
  for (unsigned L = 1; L <= levels && more; ++L) {
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < slots.size() && slots[i].height <= L; ++i) items.push_back(i);
    run_ordered(items, budget.threads, unit_at(L), [&](UnitOutput& o) {
      more = merge_into(res, seen, o, budget.count);
      return more;
    });
  }
  res.exhausted = res.certificates.size() < budget.count;
  return res;
}

JumpResult jump2(const Surface& s, const Budget& budget, const CoverChallenge& avoid) {
  JumpResult res;
  std::set<Rat> seen;
  std::vector<std::pair<Rat, Rat>> pairs;
  const auto xs = x0_candidates(budget.x0_height);
  if (s.is_twist()) {
    // Shared-value path: f(x0) f(x1) must be a square.
    std::map<Int, std::vector<Rat>> by_class;
    for (const Rat& x1 : xs) {
      Rat v = fibre_cubic(s, x1);
      if (v == 0) continue;
      auto& members = by_class[squarefree_part(v).core];
      for (const Rat& x0 : members) pairs.emplace_back(x0, x1);
      members.push_back(x1);
    }
  } else {
    std::vector<Rat> valid;
    for (const Rat& x : xs)
      if (auto c = try_fibre(s, x); c && conic_solvable(*c)) valid.push_back(x);
    for (std::size_t j = 0; j < valid.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(valid[i], valid[j]);
  }
  auto unit = [&](const std::pair<Rat, Rat>& pr) {
    return s.is_twist() ? jump2_twist_pair(s, budget, avoid, pr.first, pr.second)
                        : jump2_km_pair(s, budget, avoid, pr.first, pr.second);
  };
  run_ordered(pairs, budget.threads, unit, [&](UnitOutput& o) { return merge_into(res, seen, o, budget.count); });
  res.exhausted = res.certificates.size() < budget.count;
  return res;
}

JumpResult avoid_covers(const Surface& s, const CoverChallenge& ch, const Budget& budget, int rank) {
  if (rank == 2) return jump2(s, budget, ch);
  return jump1(s, budget, ch);
}

Census field_census(const Surface& s, unsigned x0_height_bound) {
  Census census;
  census.height_bound = x0_height_bound;
  std::map<QuadExtClass, std::vector<Rat>> classes;
  for (const Rat& x0 : rationals_up_to_height(x0_height_bound)) {
    auto c = try_fibre(s, x0);
    if (!c || !conic_solvable(*c)) continue;
    ++census.fibres;
    classes[c->ext_class].push_back(x0);
  }
  for (auto& [cls, xs] : classes) census.classes.push_back({cls, std::move(xs)});
  return census;
}

VerificationReport verify_certificate(const Surface& s, const RankJumpCertificate& c) {
  VerificationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.failures.push_back(std::move(msg));
  };
  if (c.surface_id != surface_id(s)) fail("surface id mismatch");
  auto sp = try_specialize(s, c.t0);
  if (!sp) {
    fail("t0 lies under a singular fibre");
    return rep;
  }
  if (sp->curve.A() != c.A || sp->curve.B() != c.B) fail("specialized curve mismatch");
  std::vector<PointQ> pts;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& cp = c.points[i];
    const std::string tag = "point " + std::to_string(i) + ": ";
    if (s.fibre_residual(c.t0, cp.fibre_x, cp.fibre_y) != 0) fail(tag + "not on the fibre over t0");
    if (cp.fibre_x != cp.x0) fail(tag + "provenance x0 differs from fibre x");
    if (!sp->curve.contains(cp.point)) {
      fail(tag + "not on the specialized curve");
      continue;
    }
    if (PointQ::affine(sp->x_scale * cp.fibre_x + sp->x_shift, sp->y_scale * cp.fibre_y) != cp.point)
      fail(tag + "transport mismatch");
    if (is_torsion(sp->curve, cp.point).torsion) fail(tag + "torsion");
    pts.push_back(cp.point);
  }
  if (!rep.ok) return rep;
  auto [r, exact] = generic_rank(s);
  if (r != c.generic_rank_bound || exact != c.generic_rank_exact) fail("generic rank data mismatch");
  RegulatorResult reg = regulator(sp->curve, pts);
  if (reg.verdict != RegulatorVerdict::Independent) fail("regulator recount: " + to_string(reg.verdict));
  const int expected = (exact ? r : 0) + static_cast<int>(pts.size());
  if (c.claimed_rank_lower_bound != expected)
    fail("regulator recount: claimed bound " + std::to_string(c.claimed_rank_lower_bound) + " != recomputed " +
         std::to_string(expected));
  return rep;
}

}  // namespace rankjump
