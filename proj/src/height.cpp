#include "rankjump/height.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace rankjump {

namespace mp = boost::multiprecision;

template <unsigned D>
using RealT = mp::number<mp::mpfr_float_backend<D>, mp::et_off>;

namespace {

constexpr long kInfiniteValuation = 1L << 30;

long val(const Rat& r, const Int& p) { return r == 0 ? kInfiniteValuation : valuation(r, p); }

template <class Real>
Real to_real(const Int& n) {
  return Real(n.str());
}

template <class Real>
Real to_real(const Rat& r) {
  return to_real<Real>(num(r)) / to_real<Real>(den(r));
}

// Long Weierstrass model with integral coefficients.
struct LongModel {
  Rat a1, a2, a3, a4, a6;

  Rat b2() const { return a1 * a1 + 4 * a2; }
  Rat b4() const { return 2 * a4 + a1 * a3; }
  Rat b6() const { return a3 * a3 + 4 * a6; }
  Rat b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
  Rat c4() const { return b2() * b2() - 24 * b4(); }
  Rat disc() const {
    Rat B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }
  bool integral() const {
    return den(a1) == 1 && den(a2) == 1 && den(a3) == 1 && den(a4) == 1 && den(a6) == 1;
  }
};

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t
LongModel transform(const LongModel& m, const Rat& u, const Rat& r, const Rat& s, const Rat& t) {
  LongModel n;
  const Rat u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  n.a1 = (m.a1 + 2 * s) / u;
  n.a2 = (m.a2 - s * m.a1 + 3 * r - s * s) / u2;
  n.a3 = (m.a3 + r * m.a1 + 2 * t) / u3;
  n.a4 = (m.a4 - s * m.a3 + 2 * r * m.a2 - (t + r * s) * m.a1 + 3 * r * r - 2 * s * t) / u4;
  n.a6 = (m.a6 + r * m.a4 + r * r * m.a2 + r * r * r - t * m.a3 - t * t - r * t * m.a1) / u6;
  return n;
}

struct LocalModel {
  LongModel model;
  Rat x, y;
  unsigned reductions = 0;
};

// Reduces an integral model at p until it is minimal there, carrying the point along.
LocalModel minimal_at(const Int& p, LongModel m, Rat x, Rat y) {
  LocalModel out{m, x, y, 0};
  const Rat u(p);
  while (val(out.model.disc(), p) >= 12) {
    bool reduced = false;
    const Int p2 = p * p, p3 = p2 * p;
    for (Int r = 0; r < p2 && !reduced; ++r)
      for (Int s = 0; s < p && !reduced; ++s)
        for (Int t = 0; t < p3 && !reduced; ++t) {
          LongModel n = transform(out.model, u, Rat(r), Rat(s), Rat(t));
          if (!n.integral()) continue;
          const Rat xn = (out.x - Rat(r)) / (u * u);
          const Rat yn = (out.y - Rat(s) * u * u * xn - Rat(t)) / (u * u * u);
          out = {n, xn, yn, out.reductions + 1};
          reduced = true;
        }
    if (!reduced) break;
  }
  return out;
}

// Local height at p in units of log p, without the discriminant term.
Rat local_height_units(const LongModel& m, const Rat& x, const Rat& y, const Int& p) {
  const long N = val(m.disc(), p);
  const long vA = val(3 * x * x + 2 * m.a2 * x + m.a4 - m.a1 * y, p);
  const long vB = val(2 * y + m.a1 * x + m.a3, p);
  if (vA <= 0 || vB <= 0) return Rat(std::max(0L, -val(x, p)));
  if (val(m.c4(), p) == 0) {
    Rat M = std::min(Rat(vB), Rat(N, 2));
    return M * (M - N) / N;
  }
  const long vC =
      val(3 * x * x * x * x + m.b2() * x * x * x + 3 * m.b4() * x * x + 3 * m.b6() * x + m.b8(), p);
  if (vC >= 3 * vB) return Rat(-2 * vB, 3);
  return Rat(-vC, 4);
}

struct NonArchimedean {
  std::vector<std::pair<Int, Rat>> terms;  // (p, L_p)
  Int disc_short;                          // discriminant of the short integral model
  Int den_part = 1;                        // den(x) prime to 6
  unsigned red2 = 0, red3 = 0;             // reductions at 2 and 3 to reach minimality
};

NonArchimedean non_archimedean(const Int& a, const Int& b, const Rat& x, const Rat& y) {
  NonArchimedean out;
  out.disc_short = -16 * (4 * a * a * a + 27 * b * b);
  const LongModel shortm{0, 0, 0, Rat(a), Rat(b)};
  for (int pi : {2, 3}) {
    const Int p(pi);
    LocalModel lm = minimal_at(p, shortm, x, y);
    (pi == 2 ? out.red2 : out.red3) = lm.reductions;
    Rat L = local_height_units(lm.model, lm.x, lm.y, p);
    if (L != 0) out.terms.emplace_back(p, L);
  }
  // Primes of the denominator see a point reducing to O: the term is -v_p(x) log p.
  out.den_part = den(x);
  for (int pi : {2, 3})
    while (out.den_part % pi == 0) out.den_part /= pi;
  // Singular reduction at p forces p | disc.
  const Rat sing = 3 * x * x + Rat(a);
  Int g = y == 0 ? Int(abs(num(sing))) : Int(gcd(abs(num(y)), abs(num(sing))));
  g = gcd(g, out.disc_short);
  for (const auto& [p, e] : factorize(g)) {
    if (p < 5) continue;
    Rat L = local_height_units(shortm, x, y, p);
    if (L != 0) out.terms.emplace_back(p, L);
  }
  return out;
}

template <class Real>
struct Archimedean {
  Real a, b;
  bool three_roots = false;
  Real e1, e2, e3;  // e1 > e2 > e3 when three_roots; otherwise e1 is the real root
  Real beta;        // one-root case
  Real omega;       // real period of dx / 2y
  Real log_abs_q;
  bool q_negative = false;

  Real f(const Real& x) const { return (x * x + a) * x + b; }

  Real polish(Real x) const {
    for (int i = 0; i < 8; ++i) {
      Real d = 3 * x * x + a;
      if (d == 0) break;
      x -= f(x) / d;
    }
    return x;
  }

  Archimedean(const Int& A, const Int& B) : a(to_real<Real>(A)), b(to_real<Real>(B)) {
    using std::acos;
    using std::cbrt;
    using std::cos;
    using std::sqrt;
    const Real pi = boost::math::constants::pi<Real>();
    three_roots = 4 * A * A * A + 27 * B * B < 0;
    if (three_roots) {
      Real m = 2 * sqrt(-a / 3);
      Real arg = 3 * b / (a * m);
      if (arg > 1) arg = 1;
      if (arg < -1) arg = -1;
      Real phi = acos(arg) / 3;
      e1 = polish(m * cos(phi));
      e2 = polish(m * cos(phi - 2 * pi / 3));
      e3 = polish(m * cos(phi - 4 * pi / 3));
      std::array<Real, 3> r{e1, e2, e3};
      std::sort(r.begin(), r.end(), [](const Real& u, const Real& v) { return u > v; });
      e1 = r[0];
      e2 = r[1];
      e3 = r[2];
      omega = 2 * boost::math::ellint_rf(Real(0), e1 - e2, e1 - e3);
      Real T = 2 * boost::math::ellint_rf(Real(0), e2 - e3, e1 - e3);
      log_abs_q = -2 * pi * T / omega;
    } else {
      Real disc = b * b / 4 + a * a * a / 27;
      Real s = sqrt(disc);
      e1 = polish(cbrt(-b / 2 + s) + cbrt(-b / 2 - s));
      beta = sqrt(3 * e1 * e1 + a);
      Real m = Real(1) / 2 - 3 * e1 / (4 * beta);
      Real mt = Real(1) / 2 + 3 * e1 / (4 * beta);
      omega = 2 * boost::math::ellint_1(sqrt(m)) / sqrt(beta);
      Real T = boost::math::ellint_1(sqrt(mt)) / sqrt(beta);
      log_abs_q = -2 * pi * T / omega;
      q_negative = true;
    }
  }

  // integral of dx / sqrt(f) from x0 to infinity, x0 >= largest real root
  Real tail_integral(const Real& x0) const {
    using std::atan2;
    using std::sqrt;
    if (three_roots) return 2 * boost::math::ellint_rf(x0 - e1, x0 - e2, x0 - e3);
    Real d = x0 - e1;
    if (d < 0) d = 0;
    Real m = Real(1) / 2 - 3 * e1 / (4 * beta);
    Real phi = atan2(2 * sqrt(d * beta), d - beta);
    return boost::math::ellint_1(sqrt(m), phi) / sqrt(beta);
  }

  // Silverman-normalized archimedean local height.
  Real lambda(const Rat& xq, const Rat& yq, unsigned digits) const {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    const Real pi = boost::math::constants::pi<Real>();
    const Real x0 = to_real<Real>(xq);
    Real theta, r(1), rho(0);
    bool egg = three_roots && x0 < e1 && !(yq == 0 && abs(x0 - e1) < abs(x0 - e2));
    if (!egg) {
      Real start = x0 < e1 ? e1 : x0;
      theta = pi * tail_integral(start) / omega;
    } else {
      r = exp(log_abs_q / 2);
      rho = Real(1) / 2;
      if (yq == 0 && abs(x0 - e3) < abs(x0 - e2)) {
        theta = 0;
      } else {
        Real xp = e3 + (e3 - e1) * (e3 - e2) / (x0 - e3);
        if (xp < e1) xp = e1;
        theta = pi * tail_integral(xp) / omega;
      }
    }
    const Real B2 = rho * rho - rho + Real(1) / 6;
    Real res = -B2 * log_abs_q / 2;
    const Real c = cos(theta);
    if (r == 1)
      res -= log(2 * abs(sin(theta / 2)));
    else
      res -= log(1 - 2 * r * c + r * r) / 2;
    const Real q_abs = exp(log_abs_q);
    const Real eps = Real(10) / pow(Real(10), static_cast<int>(digits) + 5);
    Real qn = q_negative ? -q_abs : q_abs;
    const Real qstep = qn;
    for (long n = 1;; ++n) {
      Real t1 = log(1 - 2 * qn * r * c + qn * qn * r * r);
      Real t2 = log(1 - 2 * (qn / r) * c + qn * qn / (r * r));
      res -= (t1 + t2) / 2;
      if (abs(qn) / r < eps) break;
      if (n > 200000) throw PrecisionError("q-series did not converge");
      qn *= qstep;
    }
    return res;
  }
};

template <class Real>
Real log_real(const Int& n) {
  using std::log;
  return log(to_real<Real>(Int(abs(n))));
}

template <class Real>
Real local_route(const EllipticCurveQ& E, const PointQ& P, unsigned digits) {
  using std::log;
  const PointQ Q = E.to_integral(P);
  const Int& a = E.integral_A();
  const Int& b = E.integral_B();
  Archimedean<Real> arch(a, b);
  Real total = 2 * arch.lambda(Q.x, Q.y, digits);
  NonArchimedean na = non_archimedean(a, b, Q.x, Q.y);
  for (const auto& [p, L] : na.terms) total += to_real<Real>(L) * log_real<Real>(p);
  total += log_real<Real>(na.den_part);
  Real log_disc_min = log_real<Real>(na.disc_short) - 12 * na.red2 * log(Real(2)) - 12 * na.red3 * log(Real(3));
  total += log_disc_min / 6;
  return total;
}

template <class Real>
Real doubling_route(const EllipticCurveQ& E, const PointQ& P, unsigned steps) {
  using std::abs;
  using std::log;
  using std::max;
  const PointQ Q = E.to_integral(P);
  const Int& a = E.integral_A();
  const Int& b = E.integral_B();
  Int X = num(Q.x), Z = den(Q.x);
  Real total = log(max(to_real<Real>(Int(abs(X))), to_real<Real>(Z)));
  // gcd(phi, psi) of coprime inputs divides the resultant, a factor of R.
  const Int d4 = 4 * a * a * a + 27 * b * b;
  const Int R = abs(Int(4096 * 81 * d4 * d4 * d4 * d4));
  Int M = pow(R, steps + 3);
  Real xr = to_real<Real>(X), zr = to_real<Real>(Z);
  {
    Real s = max(abs(xr), abs(zr));
    xr /= s;
    zr /= s;
  }
  const Real ar = to_real<Real>(a), br = to_real<Real>(b);
  Real weight(1);
  for (unsigned k = 0; k < steps; ++k) {
    const Int X2 = X * X, Z2 = Z * Z;
    Int ph = (X2 * X2 - 2 * a * X2 * Z2 - 8 * b * X * Z2 * Z + a * a * Z2 * Z2) % M;
    Int ps = (4 * Z * (X2 * X + a * X * Z2 + b * Z2 * Z)) % M;
    if (ph < 0) ph += M;
    if (ps < 0) ps += M;
    Int g = gcd(gcd(ph, ps), R);
    X = ph / g;
    Z = ps / g;
    M /= g;
    X %= M;
    Z %= M;

    const Real x2 = xr * xr, z2 = zr * zr;
    Real phr = x2 * x2 - 2 * ar * x2 * z2 - 8 * br * xr * z2 * zr + ar * ar * z2 * z2;
    Real psr = 4 * zr * (x2 * xr + ar * xr * z2 + br * z2 * zr);
    Real big = max(abs(phr), abs(psr));
    weight /= 4;
    total += weight * (log(big) - log_real<Real>(g));
    xr = phr / big;
    zr = psr / big;
  }
  return total;
}

template <unsigned D>
HeightData height_at(const EllipticCurveQ& E, const PointQ& P, double tolerance) {
  HeightData h;
  h.digits = D;
  if (P.is_identity()) return h;
  const RealT<D> local = local_route<RealT<D>>(E, P, D);
  const RealT<D> doubling = doubling_route<RealT<D>>(E, P, 40);
  h.local_value = static_cast<double>(local);
  h.doubling_value = static_cast<double>(doubling);
  // Measured before rounding to double, where the two usually coincide.
  const double gap = static_cast<double>(abs(local - doubling));
  if (!(gap <= tolerance))
    throw PrecisionError("height methods disagree by " + std::to_string(gap) + " at " + std::to_string(D) +
                         " digits");
  h.value = std::max(0.0, h.local_value);
  h.error = gap + 1e-14 * (1 + std::abs(h.value));
  return h;
}

}  // namespace

unsigned initial_precision() {
  if (const char* env = std::getenv("RANKJUMP_PRECISION")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env)
      for (unsigned level : kPrecisionLevels)
        if (level >= v) return level;
    if (end != env) return kPrecisionLevels.back();
  }
  return kPrecisionLevels.front();
}

HeightData canonical_height_at(const EllipticCurveQ& E, const PointQ& P, unsigned digits, double tolerance) {
  E.require(P);
  switch (digits) {
    case 50: return height_at<50>(E, P, tolerance);
    case 100: return height_at<100>(E, P, tolerance);
    case 200: return height_at<200>(E, P, tolerance);
    case 400: return height_at<400>(E, P, tolerance);
    default: throw std::invalid_argument("unsupported precision " + std::to_string(digits));
  }
}

HeightData canonical_height(const EllipticCurveQ& E, const PointQ& P) {
  const unsigned start = initial_precision();
  std::string last;
  for (unsigned level : kPrecisionLevels) {
    if (level < start) continue;
    try {
      return canonical_height_at(E, P, level);
    } catch (const PrecisionError& e) {
      last = e.what();
    }
  }
  throw PrecisionError(last);
}

double local_height_sum(const EllipticCurveQ& E, const PointQ& P, unsigned digits) {
  E.require(P);
  if (P.is_identity()) return 0;
  switch (digits) {
    case 50: return static_cast<double>(local_route<RealT<50>>(E, P, 50));
    case 100: return static_cast<double>(local_route<RealT<100>>(E, P, 100));
    case 200: return static_cast<double>(local_route<RealT<200>>(E, P, 200));
    case 400: return static_cast<double>(local_route<RealT<400>>(E, P, 400));
    default: throw std::invalid_argument("unsupported precision " + std::to_string(digits));
  }
}

double doubling_limit_height(const EllipticCurveQ& E, const PointQ& P, unsigned digits, unsigned steps) {
  E.require(P);
  if (P.is_identity()) return 0;
  switch (digits) {
    case 50: return static_cast<double>(doubling_route<RealT<50>>(E, P, steps));
    case 100: return static_cast<double>(doubling_route<RealT<100>>(E, P, steps));
    case 200: return static_cast<double>(doubling_route<RealT<200>>(E, P, steps));
    case 400: return static_cast<double>(doubling_route<RealT<400>>(E, P, steps));
    default: throw std::invalid_argument("unsupported precision " + std::to_string(digits));
  }
}

double real_period(const EllipticCurveQ& E) {
  Archimedean<RealT<50>> arch(E.integral_A(), E.integral_B());
  return static_cast<double>(arch.omega);
}

double elliptic_log(const EllipticCurveQ& E, const PointQ& P) {
  const PointQ Q = E.to_integral(P);
  Archimedean<RealT<50>> arch(E.integral_A(), E.integral_B());
  RealT<50> x0 = to_real<RealT<50>>(Q.x);
  if (x0 < arch.e1) throw std::invalid_argument("point not on the identity component");
  return static_cast<double>(arch.tail_integral(x0) / 2);
}

std::string to_string(RegulatorVerdict v) {
  switch (v) {
    case RegulatorVerdict::Independent: return "independent";
    case RegulatorVerdict::Dependent: return "dependent";
    case RegulatorVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Determinant and propagated bound via the permutation expansion.
std::pair<double, double> determinant_with_error(const std::vector<std::vector<double>>& a,
                                                 const std::vector<std::vector<double>>& e) {
  const std::size_t n = a.size();
  if (n > 6) throw std::invalid_argument("regulator supports at most 6 points");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double det = 0, err = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = 1, hi = 1, lo = 1;
    for (std::size_t i = 0; i < n; ++i) {
      prod *= a[i][perm[i]];
      hi *= std::abs(a[i][perm[i]]) + e[i][perm[i]];
      lo *= std::abs(a[i][perm[i]]);
    }
    det += inversions % 2 ? -prod : prod;
    err += hi - lo;
  } while (std::next_permutation(perm.begin(), perm.end()));
  err += 1e-15 * (1 + std::abs(det));
  return {det, err};
}

}  // namespace

RegulatorResult regulator(const EllipticCurveQ& E, const std::vector<PointQ>& points, long bound) {
  const std::size_t n = points.size();
  RegulatorResult res;
  if (n == 0) {
    res.determinant = 1;
    res.verdict = RegulatorVerdict::Independent;
    return res;
  }
  for (const auto& P : points) E.require(P);
  std::vector<HeightData> single(n);
  for (std::size_t i = 0; i < n; ++i) single[i] = canonical_height(E, points[i]);
  std::vector<std::vector<double>> G(n, std::vector<double>(n)), err(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    G[i][i] = single[i].value;
    err[i][i] = single[i].error;
    for (std::size_t j = i + 1; j < n; ++j) {
      HeightData s = canonical_height(E, E.add(points[i], points[j]));
      G[i][j] = G[j][i] = (s.value - single[i].value - single[j].value) / 2;
      err[i][j] = err[j][i] = (s.error + single[i].error + single[j].error) / 2;
    }
  }
  res.gram = G;
  res.heights = single;
  std::tie(res.determinant, res.error) = determinant_with_error(G, err);
  if (res.determinant - res.error > kIndependenceThreshold) {
    res.verdict = RegulatorVerdict::Independent;
    return res;
  }
  // Relation search by increasing max-norm; first nonzero coefficient positive.
  for (long norm = 1; norm <= bound; ++norm) {
    std::vector<long> idx(n, -norm);
    while (true) {
      long mx = 0;
      for (long v : idx) mx = std::max(mx, std::abs(v));
      auto first = std::find_if(idx.begin(), idx.end(), [](long v) { return v != 0; });
      long g = 0;
      for (long v : idx) g = std::gcd(g, std::abs(v));
      if (mx == norm && first != idx.end() && *first > 0 && g == 1) {
        double q = 0, tol = 1e-9;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            q += idx[i] * idx[j] * G[i][j];
            tol += std::abs(static_cast<double>(idx[i] * idx[j])) * err[i][j];
          }
        if (std::abs(q) <= tol) {
          PointQ sum = PointQ::identity();
          for (std::size_t i = 0; i < n; ++i)
            if (idx[i]) sum = E.add(sum, E.scalar_mul(points[i], idx[i]));
          if (is_torsion(E, sum).torsion) {
            res.verdict = RegulatorVerdict::Dependent;
            res.relation = idx;
            return res;
          }
        }
      }
      std::size_t k = 0;
      while (k < n && idx[k] == norm) idx[k++] = -norm;
      if (k == n) break;
      ++idx[k];
    }
  }
  res.verdict = RegulatorVerdict::Inconclusive;
  return res;
}

}  // namespace rankjump
