#include "rankjump/arith.hpp"

#include <gmp.h>

#include <algorithm>
#include <map>

namespace rankjump {

namespace mp = boost::multiprecision;

Rat make_rat(const Int& n, const Int& d) {
  if (d == 0) throw DomainError("zero denominator");
  return Rat(n, d);
}

Rat parse_rat(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  auto slash = s.find('/');
  std::string n = s.substr(0, slash);
  std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d) || d[0] == '-' || d[0] == '+')
    throw std::invalid_argument("not an exact rational: '" + text + "'");
  Int dn(strip_plus(d));
  if (dn == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rat(Int(strip_plus(n)), dn);
}

std::string to_string(const Int& n) { return n.str(); }

std::string to_string(const Rat& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

Int naive_height(const Rat& r) { return std::max(Int(abs(num(r))), den(r)); }

unsigned valuation(const Int& n, const Int& p) {
  if (n == 0) throw DomainError("valuation of zero");
  unsigned v = 0;
  Int m = abs(n);
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

long valuation(const Rat& r, const Int& p) {
  return static_cast<long>(valuation(num(r), p)) - static_cast<long>(valuation(den(r), p));
}

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.backend().data(), 30) != 0;
}

namespace {

Int pollard_brent(const Int& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, ys, q = 1, g = 1;
    const unsigned long m = 64;
    unsigned long r = 1;
    auto f = [&](const Int& v) { return Int((v * v + c) % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs(Int(x - y))) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(Int(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Int& n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  if (auto r = exact_isqrt(n)) {
    std::map<Int, unsigned> half;
    factor_into(*r, half);
    for (auto& [p, e] : half) out[p] += 2 * e;
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n) {
  if (n == 0) throw DomainError("factorization of zero");
  Int m = abs(n);
  std::map<Int, unsigned> found;
  for (unsigned long p = 2; p < 10000 && Int(p) * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      ++found[Int(p)];
      m /= p;
    }
  }
  factor_into(m, found);
  return {found.begin(), found.end()};
}

SquarefreeDecomposition squarefree_part(const Rat& n) {
  if (n == 0) throw DomainError("squarefree part of zero");
  // n = a/b = (a*b) / b^2
  Int ab = num(n) * den(n);
  Int core = ab < 0 ? -1 : 1;
  Int root = 1;
  for (auto& [p, e] : factorize(ab)) {
    if (e % 2) core *= p;
    for (unsigned i = 0; i < e / 2; ++i) root *= p;
  }
  return {core, Rat(root, den(n))};
}

std::optional<Int> exact_isqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  Int r = sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

std::optional<Rat> rational_sqrt(const Rat& n) {
  if (n < 0) return std::nullopt;
  auto a = exact_isqrt(num(n));
  if (!a) return std::nullopt;
  auto b = exact_isqrt(den(n));
  if (!b) return std::nullopt;
  return Rat(*a, *b);
}

namespace {

int legendre(const Int& a, const Int& p) {
  Int r = ((a % p) + p) % p;
  return mpz_legendre(r.backend().data(), p.backend().data());
}

Int mod(const Int& a, const Int& m) { return Int(((a % m) + m) % m); }

}  // namespace

std::optional<Int> sqrt_mod_prime(const Int& a_in, const Int& p) {
  Int a = mod(a_in, p);
  if (p == 2 || a == 0) return a;
  if (legendre(a, p) != 1) return std::nullopt;
  // Tonelli-Shanks
  Int q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Int z = 2;
  while (legendre(z, p) != -1) ++z;
  Int m = s;
  Int c = powm(z, q, p);
  Int t = powm(a, q, p);
  Int r = powm(a, (q + 1) / 2, p);
  while (t != 1) {
    unsigned i = 0;
    Int t2 = t;
    while (t2 != 1) {
      t2 = (t2 * t2) % p;
      ++i;
    }
    Int b = c;
    for (Int j = 0; j < m - i - 1; ++j) b = (b * b) % p;
    m = i;
    c = (b * b) % p;
    t = (t * c) % p;
    r = (r * b) % p;
  }
  return r;
}

std::optional<Int> sqrt_mod_squarefree(const Int& a, const Int& m_in) {
  Int m = abs(m_in);
  if (m == 1) return Int(0);
  Int result = 0, modulus = 1;
  for (auto& [p, e] : factorize(m)) {
    if (e != 1) throw DomainError("modulus not squarefree");
    auto r = sqrt_mod_prime(a, p);
    if (!r) return std::nullopt;
    // CRT: result mod modulus, r mod p
    Int inv;
    {
      Int mm = mod(modulus, p);
      inv = powm(mm, p - 2, p);
      if (p == 2) inv = 1;
    }
    Int k = mod((*r - result) * inv, p);
    result += modulus * k;
    modulus *= p;
  }
  return mod(result, modulus);
}

int hilbert_symbol(const Int& a, const Int& b, const Int& p) {
  if (a == 0 || b == 0) throw DomainError("Hilbert symbol of zero");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  unsigned alpha = valuation(a, p), beta = valuation(b, p);
  Int u = a, v = b;
  for (unsigned i = 0; i < alpha; ++i) u /= p;
  for (unsigned i = 0; i < beta; ++i) v /= p;
  if (p == 2) {
    auto eps = [](const Int& x) { return static_cast<int>(mod(Int((mod(x, 8) - 1) / 2), 2)); };
    auto omega = [](const Int& x) {
      Int r = mod(x, 8);
      return static_cast<int>(((r * r - 1) / 8) % 2);
    };
    int e = eps(u) * eps(v) + static_cast<int>(alpha % 2) * omega(v) +
            static_cast<int>(beta % 2) * omega(u);
    return e % 2 ? -1 : 1;
  }
  int sign = 1;
  Int eps = (p - 1) / 2;
  if ((alpha % 2) && (beta % 2) && (eps % 2 == 1)) sign = -sign;
  if (beta % 2) sign *= legendre(u, p);
  if (alpha % 2) sign *= legendre(v, p);
  return sign;
}

std::vector<Rat> rationals_of_height(unsigned h) {
  std::vector<Rat> out;
  if (h == 0) return out;
  if (h == 1) return {Rat(0), Rat(1), Rat(-1)};
  Int H = h;
  for (unsigned a = 1; a <= h; ++a) {
    if (a < h) {
      if (gcd(Int(a), H) != 1) continue;
      out.emplace_back(Int(a), H);
      out.emplace_back(Int(-static_cast<long>(a)), H);
    } else {
      for (unsigned b = 1; b <= h; ++b) {
        if (gcd(H, Int(b)) != 1) continue;
        out.emplace_back(H, Int(b));
        out.emplace_back(-H, Int(b));
      }
    }
  }
  return out;
}

std::vector<Rat> rationals_up_to_height(unsigned bound) {
  std::vector<Rat> out;
  for (unsigned h = 1; h <= bound; ++h) {
    auto layer = rationals_of_height(h);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace rankjump
