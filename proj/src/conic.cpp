#include "rankjump/conic.hpp"

#include <algorithm>
#include <set>

namespace rankjump {

bool operator<(const QuadExtClass& a, const QuadExtClass& b) {
  if (a.s != b.s) return a.s < b.s;
  return a.h < b.h;
}

std::string QuadExtClass::str() const {
  std::string inner = h.str();
  auto terms = std::count_if(h.coeffs().begin(), h.coeffs().end(), [](const Rat& c) { return c != 0; });
  if (terms > 1) inner = "(" + inner + ")";
  if (s == 1) return "sqrt(" + h.str() + ")";
  if (s == -1) return "sqrt(-" + inner + ")";
  return "sqrt(" + to_string(s) + "*" + inner + ")";
}

BranchLocus BranchLocus::of(std::vector<Place> places) {
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  return BranchLocus{std::move(places)};
}

int BranchLocus::geometric_count() const {
  int n = 0;
  for (const auto& p : places) n += p.degree();
  return n;
}

std::string BranchLocus::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < places.size(); ++i) {
    if (i) out += ", ";
    out += places[i].str();
  }
  return out + "}";
}

std::string ConicFibre::relation_str() const {
  std::string left = lhs.is_constant() ? (lhs.coeff(0) == 1 ? "" : to_string(lhs.coeff(0)) + "*")
                                       : "(" + lhs.str() + ")*";
  return left + "w^2 = " + rhs.str();
}

QuadExtClass quad_ext_class(const RatPoly& Q) {
  if (Q.is_zero()) throw DegenerateFibre("defining quadratic vanishes identically");
  RatPoly h = RatPoly::constant(1);
  for (const auto& [p, e] : factor(Q))
    if (e % 2) h *= p;
  if (h.is_constant()) throw DegenerateFibre("defining quadratic is a constant times a square: " + Q.str());
  return QuadExtClass{squarefree_part(Q.lead()).core, h};
}

ConicFibre conic_fibre(const Surface& s, const Rat& x0) {
  ConicFibre c;
  c.x0 = x0;
  if (const auto* tw = std::get_if<TwistFamily>(&s.definition)) {
    Rat v = tw->f(x0);
    if (v == 0) throw DegenerateFibre("f(x0) = 0 at x0 = " + to_string(x0));
    c.lhs = tw->g;
    c.rhs = RatPoly::constant(v);
  } else if (const auto* km = std::get_if<KMFamily>(&s.definition)) {
    c.lhs = RatPoly::constant(1);
    c.rhs = km->q_at(x0);
  } else {
    const auto& w = std::get<WeierstrassQt>(s.definition);
    if (w.A.degree() > 2 || w.B.degree() > 2)
      throw std::invalid_argument("x = x0 is not a conic for this Weierstrass model");
    c.lhs = RatPoly::constant(1);
    c.rhs = RatPoly::constant(x0 * x0 * x0) + w.A * x0 + w.B;
  }
  RatPoly Q = c.quadratic();
  c.ext_class = quad_ext_class(Q);
  std::vector<Place> places;
  for (const auto& p : factor(c.ext_class.h)) places.push_back(Place::finite(p.first));
  if (c.ext_class.h.degree() % 2) places.push_back(Place::infinity());
  c.branch = BranchLocus::of(std::move(places));
  return c;
}

Solvability conic_solvability(const ConicFibre& c) {
  RatPoly Q = c.quadratic();
  if (Q.degree() <= 1) return {};
  // 4 alpha Q = U^2 - D with U = 2 alpha t + beta, so (2 alpha W)^2 = alpha U^2 - alpha D.
  const Rat alpha = Q.coeff(2), beta = Q.coeff(1), gamma = Q.coeff(0);
  const Rat D = beta * beta - 4 * alpha * gamma;
  if (D == 0) throw DegenerateFibre("defining quadratic has a double root");
  Int a = squarefree_part(alpha).core;
  Int b = squarefree_part(-alpha * D).core;
  std::set<Int> places{Int(0)};
  for (const auto& [p, e] : factorize(a * b)) places.insert(p);
  places.erase(Int(2));
  Solvability out;
  for (const auto& p : places)
    if (hilbert_symbol(a, b, p) == -1) out.obstructions.push_back(p);
  if (hilbert_symbol(a, b, Int(2)) == -1) out.obstructions.push_back(Int(2));
  if (!out.obstructions.empty()) {
    out.solvable = false;
    out.obstruction = out.obstructions.front();
  }
  return out;
}

std::optional<std::array<Int, 3>> solve_legendre(const Int& a, const Int& b) {
  if (a == 0 || b == 0) throw DomainError("Legendre equation with zero coefficient");
  if (a < 0 && b < 0) return std::nullopt;
  if (a == 1) return std::array<Int, 3>{1, 1, 0};
  if (b == 1) return std::array<Int, 3>{1, 0, 1};
  if (abs(a) > abs(b)) {
    auto r = solve_legendre(b, a);
    if (!r) return r;
    return std::array<Int, 3>{(*r)[0], (*r)[2], (*r)[1]};
  }
  const Int mb = abs(b);
  auto root = sqrt_mod_squarefree(a, mb);
  if (!root) return std::nullopt;
  Int r = *root % mb;
  if (2 * r > mb) r -= mb;
  const Int c = (r * r - a) / b;
  if (c == 0) return std::array<Int, 3>{r, 1, 0};
  auto sq = squarefree_part(Rat(c));
  const Int k = num(sq.factor);
  auto sub = solve_legendre(a, sq.core);
  if (!sub) return std::nullopt;
  const auto& [x, u, z] = *sub;
  // (r + sqrt a)(x + u sqrt a) has norm b (c_sf k z)^2
  Int X = r * x + a * u, U = x + r * u, Z = sq.core * k * z;
  Int g = gcd(gcd(abs(X), abs(U)), abs(Z));
  if (g > 1) {
    X /= g;
    U /= g;
    Z /= g;
  }
  return std::array<Int, 3>{X, U, Z};
}

namespace {

// Q(T, S) - W^2 evaluated as a quadratic form and its polar bilinear form.
Rat form(const RatPoly& Q, const std::array<Rat, 3>& p) {
  return Q.coeff(2) * p[0] * p[0] + Q.coeff(1) * p[0] * p[1] + Q.coeff(0) * p[1] * p[1] - p[2] * p[2];
}

Rat polar(const RatPoly& Q, const std::array<Rat, 3>& p, const std::array<Rat, 3>& q) {
  return Q.coeff(2) * p[0] * q[0] + Q.coeff(1) * (p[0] * q[1] + p[1] * q[0]) / 2 + Q.coeff(0) * p[1] * q[1] -
         p[2] * q[2];
}

}  // namespace

ConicParametrization::ConicParametrization(const ConicFibre& c, unsigned naive_bound)
    : fibre_(c), Q_(c.quadratic()) {
  if (Q_.degree() <= 1) return;
  if (!conic_solvable(c)) throw std::invalid_argument("fibre has no rational point: " + c.relation_str());
  bool found = false;
  if (auto r = rational_sqrt(Q_.coeff(2))) {
    base_ = {Rat(1), Rat(0), *r};
    found = true;
  }
  for (unsigned h = 1; !found && h <= naive_bound; ++h) {
    for (const Rat& t : rationals_of_height(h)) {
      if (auto r = rational_sqrt(Q_(t))) {
        base_ = {t, Rat(1), *r};
        found = true;
        break;
      }
    }
  }
  if (!found) {
    const Rat alpha = Q_.coeff(2), beta = Q_.coeff(1), gamma = Q_.coeff(0);
    const Rat D = beta * beta - 4 * alpha * gamma;
    auto sa = squarefree_part(alpha), sb = squarefree_part(-alpha * D);
    auto sol = solve_legendre(sa.core, sb.core);
    if (!sol) throw std::logic_error("descent failed on a locally solvable conic");
    // X^2 = alpha U'^2 - alpha D Z'^2 with U' = U / ka, Z' = Z / kb
    Rat X((*sol)[0]), U = Rat((*sol)[1]) / sa.factor, Z = Rat((*sol)[2]) / sb.factor;
    base_ = {(U - beta * Z) / (2 * alpha), Z, X / (2 * alpha)};
  }
  if (form(Q_, base_) != 0) throw std::logic_error("base point is not on the conic");
  free_plane_ = base_[2] != 0 ? 2 : (base_[1] != 0 ? 1 : 0);
}

std::optional<ConicPoint> ConicParametrization::at(const std::optional<Rat>& m) const {
  const Rat m1 = m ? *m : Rat(1), m2 = m ? Rat(1) : Rat(0);
  ConicPoint p;
  if (Q_.degree() <= 1) {
    if (fibre_.lhs.is_constant()) {
      // L w^2 = q1 t + q0
      if (!m) return std::nullopt;
      const Rat L = fibre_.lhs.coeff(0);
      p = {(L * m1 * m1 - fibre_.rhs.coeff(0)) / fibre_.rhs.coeff(1), m1};
    } else {
      // (g1 t + g0) w^2 = c
      if (!m || *m == 0) return std::nullopt;
      const Rat c = fibre_.rhs.coeff(0);
      p = {(c / (m1 * m1) - fibre_.lhs.coeff(0)) / fibre_.lhs.coeff(1), m1};
    }
  } else {
    std::array<Rat, 3> v;
    switch (free_plane_) {
      case 2: v = {m1, m2, Rat(0)}; break;
      case 1: v = {m1, Rat(0), m2}; break;
      default: v = {Rat(0), m1, m2}; break;
    }
    const Rat Fv = form(Q_, v), B = polar(Q_, base_, v);
    std::array<Rat, 3> q;
    for (int i = 0; i < 3; ++i) q[i] = Fv * base_[i] - 2 * B * v[i];
    if (q[1] == 0) return std::nullopt;
    const Rat t = q[0] / q[1], W = q[2] / q[1];
    const Rat l = fibre_.lhs(t);
    if (l == 0) return std::nullopt;
    p = {t, W / l};
  }
  if (!fibre_.on_fibre(p)) throw std::logic_error("parametrization left the fibre");
  return p;
}

std::vector<std::optional<Rat>> ConicParametrization::parameters_of_height(unsigned h) {
  std::vector<std::optional<Rat>> out;
  if (h == 1) out.push_back(std::nullopt);
  for (const Rat& r : rationals_of_height(h)) out.emplace_back(r);
  return out;
}

std::vector<ConicPoint> parametrize(const ConicFibre& c, unsigned height_bound) {
  ConicParametrization param(c);
  std::vector<ConicPoint> out;
  for (unsigned h = 1; h <= height_bound; ++h)
    for (const auto& m : ConicParametrization::parameters_of_height(h))
      if (auto p = param.at(m)) out.push_back(*p);
  return out;
}

bool same_extension(const ConicFibre& a, const ConicFibre& b) { return a.ext_class == b.ext_class; }

std::string to_string(ProductGenus g) {
  switch (g) {
    case ProductGenus::Reducible: return "reducible";
    case ProductGenus::GenusZero: return "genus 0";
    case ProductGenus::GenusOne: return "genus 1";
  }
  return "?";
}

ProductGenus fibre_product_genus(const BranchLocus& b1, const BranchLocus& b2) {
  if (b1.geometric_count() != 2 || b2.geometric_count() != 2)
    throw std::invalid_argument("branch loci must have exactly two geometric points");
  int common = 0;
  for (const auto& p : b1.places)
    if (std::find(b2.places.begin(), b2.places.end(), p) != b2.places.end()) common += p.degree();
  if (common == 2) return ProductGenus::Reducible;
  return common == 1 ? ProductGenus::GenusZero : ProductGenus::GenusOne;
}

}  // namespace rankjump
