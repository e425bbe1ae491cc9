#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rankjump/poly.hpp"
#include "support.hpp"

#include <numeric>

using namespace rankjump;
using testing::random_nonzero_rat;
using testing::random_poly;
using testing::random_rat;
using testing::uniform;

namespace {

// Sylvester-matrix resultant.
Rat sylvester_resultant(const RatPoly& a, const RatPoly& b) {
  const int m = a.degree(), n = b.degree();
  const int size = m + n;
  std::vector<std::vector<Rat>> M(size, std::vector<Rat>(size));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) M[r][r + i] = a.coeff(m - i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) M[n + r][r + i] = b.coeff(n - i);
  return testing::determinant(M);
}

// Classical discriminant formulas in terms of the coefficients.
Rat discriminant_oracle(const RatPoly& p) {
  if (p.degree() == 2) {
    const Rat a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    return b * b - 4 * a * c;
  }
  const Rat a = p.coeff(3), b = p.coeff(2), c = p.coeff(1), d = p.coeff(0);
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

// Local solubility of z^2 = a x^2 + b y^2 by search for primitive solutions mod p^k.
bool primitive_solution_mod(long a, long b, long pk, long p) {
  auto mod = [&](long v) { return ((v % pk) + pk) % pk; };
  std::vector<long> sq(pk);
  for (long i = 0; i < pk; ++i) sq[i] = mod(i * i);
  for (long x = 0; x < pk; ++x)
    for (long y = 0; y < pk; ++y)
      for (long z = 0; z < pk; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (mod(a * sq[x] + b * sq[y] - sq[z]) == 0) return true;
      }
  return false;
}

long euler_phi(long n) {
  long count = 0;
  for (long k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++count;
  return count;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rat("-6/4") == Rat(-3) / 2);
  CHECK(to_string(parse_rat("10/4")) == "5/2");
  CHECK_THROWS_AS(parse_rat("10/-4"), std::invalid_argument);
  CHECK(to_string(Rat(7)) == "7");
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  for (int i = 0; i < 200; ++i) {
    Rat r = random_rat(1000);
    CHECK(parse_rat(to_string(r)) == r);
  }
}

TEST_CASE("naive height and valuations") {
  CHECK(naive_height(Rat(-7) / 3) == 7);
  CHECK(naive_height(Rat(2) / 9) == 9);
  CHECK(naive_height(Rat(0)) == 1);
  CHECK(valuation(Int(72), Int(2)) == 3);
  CHECK(valuation(Rat(5) / 12, Int(2)) == -2);
  CHECK_THROWS_AS(valuation(Int(0), Int(3)), DomainError);
}

TEST_CASE("factorization matches trial division") {
  for (int i = 0; i < 300; ++i) {
    Int n = uniform(1, 2000000) * (uniform(0, 1) ? 1 : -1);
    CHECK(factorize(n) == testing::trial_factor(n));
  }
  // A product of two large primes exercises the Pollard-Brent path.
  const Int p("1000000007"), q("998244353");
  auto f = factorize(p * q * 12);
  REQUIRE(f.size() == 4);
  CHECK(f[2].first == q);
  CHECK(f[3].first == p);
}

TEST_CASE("squarefree part examples") {
  auto a = squarefree_part(Rat(12));
  CHECK(a.core == 3);
  CHECK(a.factor == 2);
  auto b = squarefree_part(Rat(-1));
  CHECK(b.core == -1);
  CHECK(b.factor == 1);
  auto c = squarefree_part(Rat(144));
  CHECK(c.core == 1);
  CHECK(c.factor == 12);
  CHECK_THROWS_AS(squarefree_part(Rat(0)), DomainError);
}

TEST_CASE("squarefree part recomposes and is squarefree") {
  for (int i = 0; i < 300; ++i) {
    Rat n = random_nonzero_rat(5000);
    auto d = squarefree_part(n);
    CHECK(Rat(d.core) * d.factor * d.factor == n);
    CHECK(d.factor > 0);
    for (const auto& [p, e] : testing::trial_factor(d.core)) CHECK(e == 1);
  }
}

TEST_CASE("is_square examples and square roots") {
  CHECK(rational_sqrt(Rat(144)) == Rat(12));
  CHECK_FALSE(is_square(Rat(6)));
  CHECK(rational_sqrt(Rat(36) / 25) == Rat(6) / 5);
  CHECK_FALSE(is_square(Rat(-4)));
  CHECK(rational_sqrt(Rat(0)) == Rat(0));
  for (int i = 0; i < 200; ++i) {
    Rat r = random_rat(10000);
    CHECK(rational_sqrt(r * r) == abs(r));
    // n^2 + 1 is never a square for n != 0.
    if (r != 0 && den(r) == 1) CHECK_FALSE(is_square(r * r + 1));
  }
}

TEST_CASE("modular square roots") {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 101L, 1009L}) {
    for (long a = 0; a < std::min(p, 60L); ++a) {
      bool residue = false;
      for (long x = 0; x < p; ++x)
        if ((x * x) % p == a) residue = true;
      auto r = sqrt_mod_prime(Int(a), Int(p));
      CHECK(r.has_value() == residue);
      if (r) CHECK((*r * *r - a) % p == 0);
    }
  }
  auto r = sqrt_mod_squarefree(Int(4), Int(105));
  REQUIRE(r);
  CHECK((*r * *r - 4) % 105 == 0);
}

TEST_CASE("Hilbert symbol agrees with local solubility search") {
  const std::vector<long> values{-15, -10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15};
  for (long a : values)
    for (long b : values) {
      // Real place: solvable unless both negative.
      CHECK(hilbert_symbol(Int(a), Int(b), Int(0)) == ((a < 0 && b < 0) ? -1 : 1));
      for (long p : {2L, 3L, 5L, 7L}) {
        const long pk = p == 2 ? 32 : p * p;
        const int expected = primitive_solution_mod(a, b, pk, p) ? 1 : -1;
        CHECK_MESSAGE(hilbert_symbol(Int(a), Int(b), Int(p)) == expected, "a=", a, " b=", b, " p=", p);
      }
    }
}

TEST_CASE("Hilbert product formula") {
  for (int i = 0; i < 100; ++i) {
    Int a = uniform(-300, 300), b = uniform(-300, 300);
    if (a == 0 || b == 0) continue;
    int prod = hilbert_symbol(a, b, Int(0)) * hilbert_symbol(a, b, Int(2));
    for (const auto& [p, e] : factorize(a * b))
      if (p != 2) prod *= hilbert_symbol(a, b, p);
    CHECK(prod == 1);
  }
}

TEST_CASE("rationals of a given height") {
  CHECK(rationals_of_height(1) == std::vector<Rat>{Rat(0), Rat(1), Rat(-1)});
  CHECK(rationals_of_height(2) == std::vector<Rat>{Rat(1) / 2, Rat(-1) / 2, Rat(2), Rat(-2)});
  for (unsigned h = 2; h <= 25; ++h) {
    auto v = rationals_of_height(h);
    CHECK(static_cast<long>(v.size()) == 4 * euler_phi(h));
    for (const auto& r : v) CHECK(naive_height(r) == h);
    std::vector<Rat> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
  CHECK(rationals_up_to_height(3).size() == 3 + 4 + 8);
}

TEST_CASE("polynomial discriminant examples") {
  CHECK(poly_discriminant(RatPoly{0, -1, 0, 1}) == 4);
  CHECK(poly_discriminant(RatPoly{-2, 0, 1}) == 8);
  CHECK(poly_discriminant(RatPoly{0, 0, 0, 1}) == 0);
  CHECK_THROWS_AS(poly_discriminant(RatPoly{1, 1}), UnsupportedDegree);
}

TEST_CASE("discriminant matches the coefficient formula") {
  for (int i = 0; i < 200; ++i) {
    RatPoly p = random_poly(static_cast<int>(uniform(2, 3)), 20);
    CHECK(poly_discriminant(p) == discriminant_oracle(p));
  }
}

TEST_CASE("gcd with the derivative detects repeated roots") {
  for (int i = 0; i < 200; ++i) {
    RatPoly p;
    if (i % 2) {
      // Force a repeated root.
      const Rat r = random_rat(10);
      p = RatPoly::linear_root(r).pow(2) * random_poly(static_cast<int>(uniform(0, 1)), 10);
    } else {
      p = random_poly(static_cast<int>(uniform(2, 3)), 10);
    }
    if (p.degree() < 2) continue;
    const bool repeated = gcd(p, p.derivative()).degree() > 0;
    CHECK(repeated == (poly_discriminant(p) == 0));
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  for (int i = 0; i < 200; ++i) {
    RatPoly p = random_poly(static_cast<int>(uniform(0, 5)), 30, false);
    RatPoly q = random_poly(static_cast<int>(uniform(0, 5)), 30, false);
    Rat x = random_rat(40);
    CHECK((p * q)(x) == p(x) * q(x));
    CHECK((p + q)(x) == p(x) + q(x));
    CHECK((p - q)(x) == p(x) - q(x));
    CHECK(p.compose(q)(x) == p(q(x)));
  }
}

TEST_CASE("division with remainder and gcd") {
  for (int i = 0; i < 200; ++i) {
    RatPoly a = random_poly(static_cast<int>(uniform(0, 6)), 20);
    RatPoly b = random_poly(static_cast<int>(uniform(0, 4)), 20);
    auto [q, r] = divrem(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    RatPoly c = random_poly(static_cast<int>(uniform(1, 2)), 10);
    RatPoly g = gcd(a * c, b * c);
    CHECK(g.lead() == 1);
    CHECK(divides(c, g));
    CHECK(divides(g, a * c));
    CHECK(divides(g, b * c));
  }
  CHECK(gcd(RatPoly{}, RatPoly{}).is_zero());
}

TEST_CASE("resultant equals the Sylvester determinant") {
  for (int i = 0; i < 150; ++i) {
    RatPoly a = random_poly(static_cast<int>(uniform(1, 4)), 10);
    RatPoly b = random_poly(static_cast<int>(uniform(1, 4)), 10);
    CHECK(resultant(a, b) == sylvester_resultant(a, b));
  }
  CHECK(resultant(RatPoly{-1, 1}, RatPoly{-1, 0, 1}) == 0);
}

TEST_CASE("factorization over Q") {
  // (t - 1)^2 (t^2 - 2) (t^2 + 1)
  RatPoly p = RatPoly::linear_root(1).pow(2) * RatPoly{-2, 0, 1} * RatPoly{1, 0, 1} * Rat(3);
  auto f = factor(p);
  RatPoly prod = RatPoly::constant(p.lead());
  for (const auto& [q, e] : f) {
    CHECK(q.lead() == 1);
    prod *= q.pow(e);
  }
  CHECK(prod == p);
  CHECK(f.size() == 3);
  CHECK(factor(RatPoly::constant(5)).empty());

  for (int i = 0; i < 60; ++i) {
    RatPoly a = random_poly(static_cast<int>(uniform(1, 3)), 6), b = random_poly(static_cast<int>(uniform(1, 3)), 6);
    RatPoly p2 = a * b * a;
    RatPoly back = RatPoly::constant(p2.lead());
    for (const auto& [q, e] : factor(p2)) {
      back *= q.pow(e);
      // Irreducible factors of degree <= 3 have no rational root.
      if (q.degree() >= 2 && q.degree() <= 3) {
        for (const auto& r : rationals_up_to_height(12)) CHECK(q(r) != 0);
      }
    }
    CHECK(back == p2);
  }
}

TEST_CASE("squarefree kernel and places") {
  RatPoly p = RatPoly{0, 1}.pow(3) * RatPoly{-2, 0, 1} * Rat(-4);
  CHECK(squarefree_kernel(p) == RatPoly{0, -2, 0, 1});
  CHECK(valuation(p, RatPoly{0, 1}) == 3);
  CHECK(valuation(p, RatPoly{-2, 0, 1}) == 1);
  CHECK(valuation_at_infinity(RatPoly{0, 0, 1}, 4) == 2);
  CHECK(Place::finite(RatPoly{-2, 0, 1}).degree() == 2);
  CHECK(Place::infinity().degree() == 1);
  CHECK(RatPoly{-1, 0, 1}.str() == "t^2 - 1");
  CHECK(RatPoly{Rat(1) / 2, -1}.str("x") == "-x + 1/2");
}
