#include "rankjump/curve.hpp"

#include <map>

namespace rankjump {

std::string PointQ::str() const {
  if (infinity) return "O";
  return "(" + to_string(x) + ", " + to_string(y) + ")";
}

EllipticCurveQ::EllipticCurveQ(Rat A, Rat B) : A_(std::move(A)), B_(std::move(B)) {
  if (4 * A_ * A_ * A_ + 27 * B_ * B_ == 0) throw DomainError("singular curve");
  // Smallest u with u^4 A and u^6 B integral.
  std::map<Int, unsigned> need;
  for (const auto& [p, e] : factorize(den(A_))) need[p] = std::max(need[p], (e + 3) / 4);
  for (const auto& [p, e] : factorize(den(B_))) need[p] = std::max(need[p], (e + 5) / 6);
  Int u = 1;
  for (const auto& [p, e] : need)
    for (unsigned i = 0; i < e; ++i) u *= p;
  Rat a = A_ * Rat(pow(u, 4)), b = B_ * Rat(pow(u, 6));
  iA_ = num(a);
  iB_ = num(b);
  u_ = Rat(u);
  Int common = iA_ == 0 ? Int(abs(iB_)) : (iB_ == 0 ? Int(abs(iA_)) : Int(gcd(abs(iA_), abs(iB_))));
  for (const auto& [p, e] : factorize(common)) {
    (void)e;
    const Int p4 = pow(p, 4), p6 = pow(p, 6);
    while (iA_ % p4 == 0 && iB_ % p6 == 0) {
      iA_ /= p4;
      iB_ /= p6;
      u_ /= Rat(p);
    }
  }
}

Rat EllipticCurveQ::discriminant() const { return -16 * (4 * A_ * A_ * A_ + 27 * B_ * B_); }

PointQ EllipticCurveQ::to_integral(const PointQ& P) const {
  if (P.infinity) return P;
  return PointQ::affine(u_ * u_ * P.x, u_ * u_ * u_ * P.y);
}

bool EllipticCurveQ::contains(const PointQ& P) const {
  if (P.infinity) return true;
  return P.y * P.y == P.x * P.x * P.x + A_ * P.x + B_;
}

void EllipticCurveQ::require(const PointQ& P) const {
  if (!contains(P)) throw std::invalid_argument("point " + P.str() + " is not on " + str());
}

PointQ EllipticCurveQ::negate(const PointQ& P) const {
  if (P.infinity) return P;
  return PointQ::affine(P.x, -P.y);
}

PointQ EllipticCurveQ::add(const PointQ& P, const PointQ& Q) const {
  require(P);
  require(Q);
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  Rat lambda;
  if (P.x == Q.x) {
    if (P.y != Q.y || P.y == 0) return PointQ::identity();
    lambda = (3 * P.x * P.x + A_) / (2 * P.y);
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  Rat x = lambda * lambda - P.x - Q.x;
  Rat y = lambda * (P.x - x) - P.y;
  return PointQ::affine(std::move(x), std::move(y));
}

PointQ EllipticCurveQ::scalar_mul(const PointQ& P, long n) const {
  require(P);
  PointQ base = n < 0 ? negate(P) : P;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  PointQ acc = PointQ::identity();
  while (k) {
    if (k & 1) acc = add(acc, base);
    base = add(base, base);
    k >>= 1;
  }
  return acc;
}

std::string EllipticCurveQ::str() const {
  return "y^2 = " + RatPoly{B_, A_, Rat(0), Rat(1)}.str("x");
}

TorsionVerdict is_torsion(const EllipticCurveQ& E, const PointQ& P) {
  E.require(P);
  if (P.infinity) return {true, 1};
  // Torsion points on an integral model have integral coordinates.
  auto integral = [&](const PointQ& Q) {
    if (Q.infinity) return true;
    PointQ R = E.to_integral(Q);
    return den(R.x) == 1 && den(R.y) == 1;
  };
  PointQ Q = P;
  for (int n = 1; n <= 12; ++n) {
    if (Q.infinity) return {true, n};
    if (!integral(Q)) return {false, 0};
    Q = E.add(Q, P);
  }
  return {false, 0};
}

PointQ Specialization::transport(const Rat& x, const Rat& y) const {
  PointQ P = PointQ::affine(x_scale * x + x_shift, y_scale * y);
  curve.require(P);
  return P;
}

Specialization specialize(const Surface& s, const Rat& t0) {
  const auto& w = s.weierstrass;
  const Rat A = w.model.A(t0), B = w.model.B(t0);
  const Rat d = w.transport.divisor(t0);
  const Rat xs = w.transport.x_scale(t0), ys = w.transport.y_scale(t0);
  if (4 * A * A * A + 27 * B * B == 0)
    throw SingularSpecialization("t0 = " + to_string(t0) + " lies under a singular fibre");
  if (d == 0 || xs == 0 || ys == 0)
    throw SingularSpecialization("change of variables degenerates at t0 = " + to_string(t0));
  if (const auto* tw = std::get_if<TwistFamily>(&s.definition); tw && tw->g(t0) == 0)
    throw SingularSpecialization("g(t0) = 0");
  return Specialization{t0, EllipticCurveQ(A, B), xs / (d * d), w.transport.x_shift(t0) / (d * d),
                        ys / (d * d * d)};
}

}  // namespace rankjump
