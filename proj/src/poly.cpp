#include "rankjump/poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace rankjump {

RatPoly::RatPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RatPoly::RatPoly(std::initializer_list<Rat> coeffs) : coeffs_(coeffs) { trim(); }

RatPoly RatPoly::constant(const Rat& c) { return RatPoly(std::vector<Rat>{c}); }

RatPoly RatPoly::linear_root(const Rat& root) { return RatPoly(std::vector<Rat>{-root, Rat(1)}); }

RatPoly RatPoly::monomial(const Rat& c, unsigned degree) {
  std::vector<Rat> v(degree + 1);
  v[degree] = c;
  return RatPoly(std::move(v));
}

void RatPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rat RatPoly::operator()(const Rat& x) const {
  Rat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rat> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Rat(static_cast<long>(i));
  return RatPoly(std::move(d));
}

RatPoly RatPoly::monic() const {
  if (is_zero()) return {};
  RatPoly r = *this;
  Rat l = lead();
  for (auto& c : r.coeffs_) c /= l;
  return r;
}

RatPoly RatPoly::compose(const RatPoly& q) const {
  RatPoly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + RatPoly::constant(*it);
  return acc;
}

RatPoly RatPoly::pow(unsigned n) const {
  RatPoly r = RatPoly::constant(1), b = *this;
  while (n) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return r;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

RatPoly& RatPoly::operator*=(const RatPoly& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rat> r(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(r);
  trim();
  return *this;
}

RatPoly& RatPoly::operator*=(const Rat& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

bool operator<(const RatPoly& a, const RatPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i];
  }
  return false;
}

std::string RatPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rat& c = coeffs_[i];
    if (c == 0) continue;
    Rat mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << to_string(mag);
    if (i >= 1) os << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

DivRem divrem(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rat> r = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {RatPoly{}, a};
  std::vector<Rat> q(da - db + 1);
  Rat lb = b.lead();
  for (int i = da; i >= db; --i) {
    Rat c = r[i] / lb;
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= c * b.coeff(j);
  }
  r.resize(db);
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

bool divides(const RatPoly& d, const RatPoly& p) {
  if (d.is_zero()) return p.is_zero();
  return divrem(p, d).remainder.is_zero();
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly r = divrem(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Rat resultant(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  int m = a.degree(), n = b.degree();
  if (n == 0) {
    Rat r = 1;
    for (int i = 0; i < m; ++i) r *= b.lead();
    return r;
  }
  if (m == 0) {
    Rat r = 1;
    for (int i = 0; i < n; ++i) r *= a.lead();
    return r;
  }
  if (m < n) {
    Rat r = resultant(b, a);
    return (m * n) % 2 ? Rat(-r) : r;
  }
  RatPoly rem = divrem(a, b).remainder;
  if (rem.is_zero()) return 0;
  Rat factor = 1;
  for (int i = 0; i < m - rem.degree(); ++i) factor *= b.lead();
  Rat sign = (m * n) % 2 ? -1 : 1;
  return sign * factor * resultant(b, rem);
}

Rat poly_discriminant(const RatPoly& p) {
  if (p.degree() == 2) {
    const Rat &c = p.coeff(0), &b = p.coeff(1), &a = p.coeff(2);
    return b * b - 4 * a * c;
  }
  if (p.degree() == 3) {
    const Rat &d = p.coeff(0), &c = p.coeff(1), &b = p.coeff(2), &a = p.coeff(3);
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
  }
  throw UnsupportedDegree("discriminant needs degree 2 or 3, got " + std::to_string(p.degree()));
}

RatPoly squarefree_kernel(const RatPoly& p) {
  if (p.is_zero()) throw DomainError("squarefree kernel of zero");
  if (p.is_constant()) return RatPoly::constant(1);
  return divrem(p, gcd(p, p.derivative())).quotient.monic();
}

namespace {

using Cplx = std::complex<long double>;

std::vector<Cplx> numeric_roots(const RatPoly& p) {
  const int n = p.degree();
  std::vector<Cplx> c(n + 1);
  RatPoly m = p.monic();
  for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(m.coeff(i).convert_to<double>());
  // Fujiwara-style bound for the initial circle.
  long double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(c[i]), 1.0L / (n - i)));
  radius = 2 * radius + 1;
  std::vector<Cplx> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(radius, 2.0L * 3.14159265358979323846L * k / n + 0.4L);
  auto eval = [&](Cplx x, Cplx& d) {
    Cplx v = c[n];
    d = 0;
    for (int i = n - 1; i >= 0; --i) {
      d = d * x + v;
      v = v * x + c[i];
    }
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (int k = 0; k < n; ++k) {
      Cplx d;
      Cplx v = eval(z[k], d);
      if (v == Cplx(0)) continue;
      Cplx ratio = v / d;
      Cplx sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      Cplx step = ratio / (1.0L - ratio * sum);
      z[k] -= step;
      change = std::max(change, std::abs(step) / (1 + std::abs(z[k])));
    }
    if (change < 1e-17L) break;
  }
  return z;
}

std::optional<Int> round_to_int(long double v) {
  long double r = std::round(v);
  if (std::abs(v - r) > 1e-3L * std::max(1.0L, std::abs(v) * 1e-12L)) return std::nullopt;
  if (std::abs(r) > 9e18L) return std::nullopt;
  return Int(static_cast<long long>(r));
}

// Searches for a monic factor of p of the given size built from root subsets.
std::optional<RatPoly> find_factor(const RatPoly& p, const std::vector<Cplx>& roots, int size,
                                   const Rat& scale) {
  const int n = static_cast<int>(roots.size());
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    std::vector<Cplx> prod{Cplx(1)};
    for (int i : idx) {
      std::vector<Cplx> next(prod.size() + 1, Cplx(0));
      for (std::size_t j = 0; j < prod.size(); ++j) {
        next[j + 1] += prod[j];
        next[j] -= prod[j] * roots[i];
      }
      prod = std::move(next);
    }
    bool ok = true;
    std::vector<Rat> coeffs(size + 1);
    for (int j = 0; j <= size && ok; ++j) {
      Cplx v = prod[j] * static_cast<long double>(scale.convert_to<double>());
      if (std::abs(v.imag()) > 1e-3L * std::max(1.0L, std::abs(v.real()))) {
        ok = false;
        break;
      }
      auto r = round_to_int(v.real());
      if (!r) {
        ok = false;
        break;
      }
      coeffs[j] = Rat(*r) / scale;
    }
    if (ok) {
      RatPoly cand(coeffs);
      if (cand.degree() == size && divides(cand, p)) return cand;
    }
    int k = size - 1;
    while (k >= 0 && idx[k] == n - size + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::nullopt;
}

}  // namespace

std::vector<RatPoly> factor_squarefree(const RatPoly& p_in) {
  std::vector<RatPoly> out;
  RatPoly p = p_in.monic();
  if (p.degree() <= 0) return out;
  // Any monic factor becomes integral after scaling by the leading
  // coefficient of the primitive integer multiple of p.
  Int lcm_den = 1;
  for (const auto& c : p.coeffs()) lcm_den = boost::multiprecision::lcm(lcm_den, den(c));
  Int content = 0;
  for (const auto& c : p.coeffs()) content = gcd(content, Int(num(c) * (lcm_den / den(c))));
  Rat scale = Rat(lcm_den) / Rat(content);
  while (p.degree() > 1) {
    if (p.degree() <= 3) {
      // No rational root means irreducible; look for one exactly.
      bool split = false;
      for (const Cplx& z : numeric_roots(p)) {
        if (std::abs(z.imag()) > 1e-6L * (1 + std::abs(z.real()))) continue;
        auto f = find_factor(p, {z}, 1, scale);
        if (f) {
          out.push_back(*f);
          p = divrem(p, *f).quotient.monic();
          split = true;
          break;
        }
      }
      if (!split) break;
      continue;
    }
    auto roots = numeric_roots(p);
    bool split = false;
    for (int size = 1; size <= p.degree() / 2 && !split; ++size) {
      if (auto f = find_factor(p, roots, size, scale)) {
        out.push_back(*f);
        p = divrem(p, *f).quotient.monic();
        split = true;
      }
    }
    if (!split) break;
  }
  if (p.degree() >= 1) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<RatPoly, unsigned>> factor(const RatPoly& p) {
  std::vector<std::pair<RatPoly, unsigned>> out;
  if (p.is_constant()) return out;
  for (auto& q : factor_squarefree(squarefree_kernel(p))) out.emplace_back(q, valuation(p, q));
  return out;
}

std::string Place::str(const std::string& var) const {
  if (at_infinity) return "inf";
  return poly.str(var);
}

bool operator<(const Place& a, const Place& b) {
  if (a.at_infinity != b.at_infinity) return !a.at_infinity;
  return a.poly < b.poly;
}

unsigned valuation(const RatPoly& p, const RatPoly& place) {
  if (p.is_zero()) throw DomainError("valuation of the zero polynomial");
  if (place.degree() < 1) throw DomainError("place must be nonconstant");
  unsigned v = 0;
  RatPoly q = p;
  while (true) {
    auto [quot, rem] = divrem(q, place);
    if (!rem.is_zero()) break;
    q = std::move(quot);
    ++v;
  }
  return v;
}

int valuation_at_infinity(const RatPoly& p, int weight) {
  if (p.is_zero()) throw DomainError("valuation of the zero polynomial");
  return weight - p.degree();
}

}  // namespace rankjump
