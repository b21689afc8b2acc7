#include "cyclint/surd.hpp"

#include <cmath>
#include <sstream>

namespace cyclint {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::msb;

QuadraticSurd::QuadraticSurd(BigInt P, BigInt Q, BigInt D)
    : P_(std::move(P)), Q_(std::move(Q)), D_(std::move(D)) {
  if (D_ <= 0) throw std::invalid_argument("surd discriminant must be positive");
  if (Q_ == 0) throw std::invalid_argument("surd denominator must be nonzero");
  const BigInt s = isqrt(D_);
  if (s * s == D_) throw std::invalid_argument("surd discriminant must not be a square");
  normalize();
}

void QuadraticSurd::normalize() {
  // Restore Q | D - P^2 by scaling all three components.
  if ((D_ - P_ * P_) % Q_ != 0) {
    const BigInt q = abs(Q_);
    P_ *= q;
    D_ *= q * q;
    Q_ *= q;
  }
  // Cheap gcd reduction: divide out g with g | P, g | Q, g^2 | D, but only
  // when the divisibility invariant survives the division. Full
  // canonicalization would need factoring; small primes cover real use.
  auto try_divide = [this](const BigInt& g) {
    if (g <= 1 || P_ % g != 0 || Q_ % g != 0 || D_ % (g * g) != 0) return false;
    const BigInt np = P_ / g, nq = Q_ / g, nd = D_ / (g * g);
    if ((nd - np * np) % nq != 0) return false;
    P_ = np;
    Q_ = nq;
    D_ = nd;
    return true;
  };
  try_divide(gcd(P_, Q_));
  static const int primes[] = {2, 3, 5, 7, 11, 13};
  for (int p : primes) {
    while (try_divide(BigInt(p))) {
    }
  }
}

double QuadraticSurd::value() const {
  const BigInt s = isqrt(D_);
  const double f = sqrt_frac(D_, s);
  const BigInt t = P_ + s;
  if (abs(t) <= 1'048'576) return (t.convert_to<double>() + f) * big_ratio(BigInt(1), Q_);
  return big_ratio(t, Q_) + f * big_ratio(BigInt(1), Q_);
}

double QuadraticSurd::log_value() const {
  const BigInt s = isqrt(D_);
  const BigInt t = P_ + s;  // floor-ish numerator; true numerator is t + frac
  if (t <= 0) {
    const double v = value();
    if (v <= 0) throw std::domain_error("log of non-positive surd");
    return std::log(v);
  }
  if (msb(t) <= 500 && msb(abs(Q_)) <= 500) {
    const double v = value();
    if (v <= 0) throw std::domain_error("log of non-positive surd");
    return std::log(v);
  }
  const double f = sqrt_frac(D_, s);
  double r = log_big(t) + std::log1p(f * big_ratio(BigInt(1), t));
  r -= log_big(abs(Q_));
  if (Q_ < 0) throw std::domain_error("log of non-positive surd");
  return r;
}

QuadraticSurd QuadraticSurd::conjugate() const { return QuadraticSurd(-P_, -Q_, D_); }

BigInt QuadraticSurd::floor() const {
  const BigInt s = isqrt(D_);  // s < sqrt(D) < s+1, never equal (D non-square)
  const BigInt num = P_ + s;
  if (Q_ > 0) {
    BigInt q = num / Q_;
    if (num % Q_ != 0 && num < 0) --q;
    return q;
  }
  // x = (P + sqrt(D))/Q with Q < 0: floor(x) = -floor(-x) - 1 since x is irrational.
  const BigInt nq = -Q_;
  BigInt q = num / nq;
  if (num % nq != 0 && num < 0) --q;
  return -q - 1;
}

QuadraticSurd QuadraticSurd::mobius(const UnimodularMatrix& m) const {
  // (a s + b)/(c s + d) rationalized: the sqrt(D) coefficient of the numerator
  // collapses to Q * det(m).
  const BigInt u = m.a * P_ + m.b * Q_;
  const BigInt v = m.c * P_ + m.d * Q_;
  const BigInt num = u * v - m.a * m.c * D_;
  const BigInt den = v * v - m.c * m.c * D_;
  const BigInt k = Q_ * m.det();
  if (den == 0) throw std::domain_error("mobius image of surd is infinite");
  // value = (num + k sqrt(D)) / den; fold |k| into the discriminant.
  if (k > 0) return QuadraticSurd(num, den, D_ * k * k);
  return QuadraticSurd(-num, -den, D_ * k * k);
}

bool QuadraticSurd::same_value(const QuadraticSurd& o) const {
  if ((Q_ > 0) != (o.Q_ > 0)) return false;
  return P_ * o.Q_ == o.P_ * Q_ && D_ * o.Q_ * o.Q_ == o.D_ * Q_ * Q_;
}

std::string QuadraticSurd::str() const {
  std::ostringstream os;
  os << "(" << P_ << "+sqrt(" << D_ << "))/" << Q_;
  return os.str();
}

QuadraticSurd purely_periodic_value(const EvenWord& W) {
  if (W.empty()) throw std::invalid_argument("periodic value needs a non-empty word");
  const UnimodularMatrix m = word_matrix(W);
  // Fixed point of m with value > 1: root of c w^2 + (d-a) w - b = 0.
  const BigInt tr = m.a + m.d;
  return QuadraticSurd(m.a - m.d, 2 * m.c, tr * tr - 4);
}

QuadraticSurd eventually_periodic_value(const EvenWord& V, const EvenWord& W) {
  const QuadraticSurd w = purely_periodic_value(W);
  if (V.empty()) return w;
  return w.mobius(word_matrix(V));
}

QuadraticSurd galois_conjugate(const QuadraticSurd& s) { return s.conjugate(); }

std::vector<BigInt> cf_expand(const QuadraticSurd& s, std::size_t n) {
  std::vector<BigInt> out;
  out.reserve(n);
  BigInt P = s.P(), Q = s.Q(), D = s.D();
  for (std::size_t i = 0; i < n; ++i) {
    const QuadraticSurd cur(P, Q, D);
    const BigInt a = cur.floor();
    out.push_back(a);
    // next = 1/(x - a): standard (P,Q) step on the current representation
    P = cur.P() - a * cur.Q();        // x - a = (P' + sqrt(D))/Q
    Q = cur.Q();
    D = cur.D();
    const BigInt P1 = -P;             // 1/(x-a) = Q(-P' + sqrt(D)) / (D - P'^2)
    const BigInt Q1 = (D - P * P) / Q;
    P = P1;
    Q = Q1;
    if (Q == 0) throw std::domain_error("cf_expand: value is rational");
  }
  return out;
}

QuadraticUnit epsilon_hat_quadratic(const EvenWord& W) {
  if (W.empty()) throw std::invalid_argument("unit needs a non-empty word");
  const std::size_t N = primitive_exponent(W);
  const EvenWord root = primitive_root(W);
  const UnimodularMatrix m = word_matrix(root);
  const QuadraticSurd w = purely_periodic_value(root);
  // c*w + d as a surd: ((cP + dQ) + c sqrt(D)) / Q with c > 0.
  const BigInt num = m.c * w.P() + m.d * w.Q();
  QuadraticSurd unit(num, w.Q(), w.D() * m.c * m.c);
  QuadraticUnit out{std::move(unit), N, 0.0, 0.0, 0.0};
  out.one_tilde = 2.0 * out.unit.log_value();
  out.one_hat = out.one_tilde * static_cast<double>(N) / static_cast<double>(W.pairs());
  out.eps_hat = std::exp(out.one_hat / 2.0);
  return out;
}

}  // namespace cyclint
