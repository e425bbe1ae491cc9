#include "rankjump/surface.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace rankjump {

namespace {

const Rat kThird = Rat(1, 3);

std::string coeff_list(const RatPoly& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) s += ",";
    s += to_string(p.coeffs()[i]);
  }
  return s + "]";
}

}  // namespace

TwistFamily TwistFamily::make(RatPoly f, RatPoly g) {
  if (f.degree() != 3) throw NotRationalElliptic("twist family: f must have degree 3");
  if (poly_discriminant(f) == 0) throw NotRationalElliptic("twist family: f must be separable");
  if (g.degree() < 1 || g.degree() > 2)
    throw NotRationalElliptic("twist family: g must be non-constant of degree at most 2");
  if (g.degree() == 2 && poly_discriminant(g) == 0)
    throw NotRationalElliptic("twist family: g must be separable");
  return TwistFamily{std::move(f), std::move(g)};
}

KMFamily KMFamily::make(std::array<RatPoly, 4> a) {
  for (const auto& c : a)
    if (c.degree() > 2) throw NotRationalElliptic("KM family: coefficient degree exceeds 2");
  if (a[3].is_zero()) throw NotRationalElliptic("KM family: a3 must be nonzero");
  return KMFamily{std::move(a)};
}

RatPoly KMFamily::q_at(const Rat& x0) const {
  RatPoly q;
  Rat power = 1;
  for (int i = 0; i < 4; ++i) {
    q += a[i] * power;
    power *= x0;
  }
  return q;
}

WeierstrassQt WeierstrassQt::make(RatPoly A, RatPoly B) {
  if (A.degree() > 4 || B.degree() > 6)
    throw NotRationalElliptic("Weierstrass model: degree bounds deg A <= 4, deg B <= 6 violated");
  WeierstrassQt w{std::move(A), std::move(B)};
  if (w.discriminant().is_zero()) throw NotRationalElliptic("Weierstrass model: discriminant vanishes");
  return w;
}

RatPoly WeierstrassQt::discriminant() const {
  return (A.pow(3) * Rat(4) + B.pow(2) * Rat(27)) * Rat(-16);
}

WeierstrassForm to_weierstrass(const SurfaceDefinition& s) {
  RatPoly A, B;
  WeierstrassTransport tr;
  if (const auto* tw = std::get_if<TwistFamily>(&s)) {
    const Rat c0 = tw->f.coeff(0), c1 = tw->f.coeff(1), c2 = tw->f.coeff(2), c3 = tw->f.coeff(3);
    Rat a = c1 * c3 - c2 * c2 * kThird;
    Rat b = c0 * c3 * c3 - c1 * c2 * c3 * kThird + Rat(2, 27) * c2 * c2 * c2;
    const RatPoly& g = tw->g;
    A = g.pow(2) * a;
    B = g.pow(3) * b;
    tr.x_scale = g * c3;
    tr.x_shift = g * (c2 * kThird);
    tr.y_scale = g.pow(2) * c3;
  } else if (const auto* km = std::get_if<KMFamily>(&s)) {
    const auto& [a0, a1, a2, a3] = km->a;
    A = a1 * a3 - a2 * a2 * kThird;
    B = a0 * a3 * a3 - a1 * a2 * a3 * kThird + a2.pow(3) * Rat(2, 27);
    tr.x_scale = a3;
    tr.x_shift = a2 * kThird;
    tr.y_scale = a3;
  } else {
    const auto& w = std::get<WeierstrassQt>(s);
    A = w.A;
    B = w.B;
  }
  if ((A.pow(3) * Rat(4) + B.pow(2) * Rat(27)).is_zero())
    throw NotRationalElliptic("generic fibre is singular");

  // Minimalize at finite places: x -> P^2 x, y -> P^3 y.
  RatPoly common = A.is_zero() ? B : (B.is_zero() ? A : gcd(A, B));
  for (const auto& [place, mult] : factor(common)) {
    (void)mult;
    while ((A.is_zero() || valuation(A, place) >= 4) && (B.is_zero() || valuation(B, place) >= 6)) {
      A = divrem(A, place.pow(4)).quotient;
      B = divrem(B, place.pow(6)).quotient;
      tr.divisor *= place;
    }
  }
  if (A.degree() > 4 || B.degree() > 6)
    throw NotRationalElliptic("minimal model has deg A > 4 or deg B > 6; not a rational elliptic surface");
  if (A.degree() <= 0 && B.degree() <= 0)
    throw NotRationalElliptic("family is constant after minimalization");
  return WeierstrassForm{WeierstrassQt::make(std::move(A), std::move(B)), std::move(tr)};
}

int KodairaType::components() const {
  switch (kind) {
    case KodairaKind::I0: return 1;
    case KodairaKind::In: return n;
    case KodairaKind::II: return 1;
    case KodairaKind::III: return 2;
    case KodairaKind::IV: return 3;
    case KodairaKind::InStar: return 5 + n;
    case KodairaKind::IVStar: return 7;
    case KodairaKind::IIIStar: return 8;
    case KodairaKind::IIStar: return 9;
  }
  return 1;
}

int KodairaType::euler_number() const {
  switch (kind) {
    case KodairaKind::I0: return 0;
    case KodairaKind::In: return n;
    case KodairaKind::II: return 2;
    case KodairaKind::III: return 3;
    case KodairaKind::IV: return 4;
    case KodairaKind::InStar: return n + 6;
    case KodairaKind::IVStar: return 8;
    case KodairaKind::IIIStar: return 9;
    case KodairaKind::IIStar: return 10;
  }
  return 0;
}

bool KodairaType::reduced() const {
  return kind != KodairaKind::InStar && kind != KodairaKind::IVStar && kind != KodairaKind::IIIStar &&
         kind != KodairaKind::IIStar;
}

std::string KodairaType::str() const {
  switch (kind) {
    case KodairaKind::I0: return "I0";
    case KodairaKind::In: return "I" + std::to_string(n);
    case KodairaKind::II: return "II";
    case KodairaKind::III: return "III";
    case KodairaKind::IV: return "IV";
    case KodairaKind::InStar: return "I" + std::to_string(n) + "*";
    case KodairaKind::IVStar: return "IV*";
    case KodairaKind::IIIStar: return "III*";
    case KodairaKind::IIStar: return "II*";
  }
  return "?";
}

KodairaType kodaira_from_valuations(int vA, int vB, int vD) {
  constexpr int kInf = 1 << 20;
  const int a = vA < 0 ? kInf : vA;
  const int b = vB < 0 ? kInf : vB;
  if (a >= 4 && b >= 6) throw InvalidModel("model is not minimal at this place");
  if (vD == 0) return {KodairaKind::I0, 0};
  if (a == 0) {
    if (b != 0) throw InvalidModel("inconsistent multiplicative valuations");
    return {KodairaKind::In, vD};
  }
  if (vD == 2 && b == 1) return {KodairaKind::II, 0};
  if (vD == 3 && a == 1) return {KodairaKind::III, 0};
  if (vD == 4 && b == 2) return {KodairaKind::IV, 0};
  if (vD == 6 && a >= 2 && b >= 3) return {KodairaKind::InStar, 0};
  if (vD > 6 && a == 2 && b == 3) return {KodairaKind::InStar, vD - 6};
  if (vD == 8 && a >= 3 && b == 4) return {KodairaKind::IVStar, 0};
  if (vD == 9 && a == 3 && b >= 5) return {KodairaKind::IIIStar, 0};
  if (vD == 10 && a >= 4 && b == 5) return {KodairaKind::IIStar, 0};
  throw InvalidModel("valuations (" + std::to_string(vA) + "," + std::to_string(vB) + "," +
                     std::to_string(vD) + ") match no Kodaira type");
}

int FibreClassification::euler_number() const {
  int e = 0;
  for (const auto& f : fibres) e += f.place.degree() * f.type.euler_number();
  return e;
}

int FibreClassification::non_reduced_count() const {
  int c = 0;
  for (const auto& f : fibres)
    if (!f.type.reduced()) c += f.place.degree();
  return c;
}

std::string FibreClassification::configuration() const {
  auto rank = [](const KodairaType& t) { return std::pair(static_cast<int>(t.kind), t.n); };
  std::map<std::pair<int, int>, std::pair<KodairaType, int>> counts;
  for (const auto& f : fibres) {
    auto& slot = counts[rank(f.type)];
    slot.first = f.type;
    slot.second += f.place.degree();
  }
  std::string out;
  for (const auto& [key, entry] : counts) {
    if (!out.empty()) out += " + ";
    if (entry.second > 1) out += std::to_string(entry.second);
    out += entry.first.str();
  }
  return out.empty() ? "smooth" : out;
}

FibreClassification classify_fibres(const WeierstrassQt& w) {
  const RatPoly delta = w.discriminant();
  if (delta.is_zero()) throw InvalidModel("discriminant vanishes");
  FibreClassification out;
  for (const auto& [place, e] : factor(delta)) {
    int vA = w.A.is_zero() ? -1 : static_cast<int>(valuation(w.A, place));
    int vB = w.B.is_zero() ? -1 : static_cast<int>(valuation(w.B, place));
    int vD = static_cast<int>(e);
    out.fibres.push_back({Place::finite(place), kodaira_from_valuations(vA, vB, vD), vA, vB, vD});
  }
  int vA = w.A.is_zero() ? -1 : valuation_at_infinity(w.A, 4);
  int vB = w.B.is_zero() ? -1 : valuation_at_infinity(w.B, 6);
  int vD = valuation_at_infinity(delta, 12);
  if ((!w.A.is_zero() && vA < 0) || (!w.B.is_zero() && vB < 0))
    throw InvalidModel("degree bounds violated at infinity");
  if (vD > 0) out.fibres.push_back({Place::infinity(), kodaira_from_valuations(vA, vB, vD), vA, vB, vD});
  return out;
}

std::optional<TwistFamily> is_twist_case(const WeierstrassQt& w) {
  const RatPoly delta = w.discriminant();
  RatPoly g = squarefree_kernel(delta);
  if (g.degree() < 1 || g.degree() > 2) return std::nullopt;
  auto constant_quotient = [](const RatPoly& p, const RatPoly& d) -> std::optional<Rat> {
    if (p.is_zero()) return Rat(0);
    auto [q, r] = divrem(p, d);
    if (!r.is_zero() || !q.is_constant()) return std::nullopt;
    return q.coeff(0);
  };
  if (!constant_quotient(delta, g.pow(6))) return std::nullopt;
  auto a = constant_quotient(w.A, g.pow(2));
  auto b = constant_quotient(w.B, g.pow(3));
  if (!a || !b) return std::nullopt;
  return TwistFamily::make(RatPoly{*b, *a, Rat(0), Rat(1)}, g);
}

ChateletModel to_chatelet(const TwistFamily& s) {
  if (s.g.degree() != 2) throw std::invalid_argument("Chatelet model needs deg g = 2");
  const Rat alpha = s.g.coeff(2), beta = s.g.coeff(1), gamma = s.g.coeff(0);
  const Rat a0 = (beta * beta - 4 * alpha * gamma) / (4 * alpha * alpha);
  auto sq = squarefree_part(a0);
  ChateletModel m;
  m.a = sq.core;
  m.y_scale = sq.factor;
  m.t_shift = beta / (2 * alpha);
  m.f = s.f * (Rat(1) / alpha);
  return m;
}

ChateletModel::Point ChateletModel::forward(const TwistPoint& p) const {
  Rat s = p.t + t_shift;
  return Point{p.x, y_scale * p.y, s * p.y};
}

ChateletModel::TwistPoint ChateletModel::backward(const Point& p) const {
  if (p.y == 0) throw DomainError("Chatelet backward map needs y != 0");
  Rat y = p.y / y_scale;
  return TwistPoint{p.w / y - t_shift, p.x, y};
}

bool ChateletModel::on_model(const Point& p) const {
  return p.w * p.w - Rat(a) * p.y * p.y == f(p.x);
}

std::string ChateletModel::str() const {
  std::ostringstream os;
  os << "w^2 - ";
  if (a != 1) os << a;
  os << "y^2 = " << f.str("x");
  return os.str();
}

int shioda_tate_bound(const FibreClassification& c) {
  int r = 8;
  for (const auto& f : c.fibres) r -= f.place.degree() * (f.type.components() - 1);
  if (r < 0) throw InvalidModel("Shioda-Tate bound is negative: inconsistent classification");
  return r;
}

Surface Surface::make(SurfaceDefinition def, std::string label) {
  Surface s;
  s.label = std::move(label);
  s.definition = std::move(def);
  s.weierstrass = to_weierstrass(s.definition);
  s.fibres = classify_fibres(s.weierstrass.model);
  if (s.fibres.euler_number() != 12)
    throw NotRationalElliptic("Euler number " + std::to_string(s.fibres.euler_number()) + " != 12");
  return s;
}

Rat Surface::fibre_residual(const Rat& t0, const Rat& x, const Rat& y) const {
  if (const auto* tw = std::get_if<TwistFamily>(&definition)) return tw->g(t0) * y * y - tw->f(x);
  if (const auto* km = std::get_if<KMFamily>(&definition)) return y * y - km->q_at(x)(t0);
  const auto& w = std::get<WeierstrassQt>(definition);
  return y * y - (x * x * x + w.A(t0) * x + w.B(t0));
}

std::string Surface::canonical_string() const {
  if (const auto* tw = std::get_if<TwistFamily>(&definition))
    return "twist;f=" + coeff_list(tw->f) + ";g=" + coeff_list(tw->g);
  if (const auto* km = std::get_if<KMFamily>(&definition))
    return "km;a0=" + coeff_list(km->a[0]) + ";a1=" + coeff_list(km->a[1]) + ";a2=" + coeff_list(km->a[2]) +
           ";a3=" + coeff_list(km->a[3]);
  const auto& w = std::get<WeierstrassQt>(definition);
  return "weierstrass;A=" + coeff_list(w.A) + ";B=" + coeff_list(w.B);
}

}  // namespace rankjump
