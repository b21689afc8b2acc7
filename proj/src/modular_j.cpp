#include "cyclint/modular_j.hpp"

#include "cyclint/bigint.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclint {

namespace {

// c[i] holds the q^i coefficient throughout.
using Series = std::vector<BigInt>;

Series series_mul(const Series& a, const Series& b, int n) {
  Series c(n + 1, BigInt(0));
  for (int i = 0; i <= n; ++i) {
    if (a[i] == 0) continue;
    for (int k = 0; i + k <= n; ++k)
      if (b[k] != 0) c[i + k] += a[i] * b[k];
  }
  return c;
}

BigInt sigma3(int n) {
  BigInt s = 0;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    const int e = n / d;
    s += BigInt(d) * d * d;
    if (e != d) s += BigInt(e) * e * e;
  }
  return s;
}

}  // namespace

JSeries::JSeries(int order) : order_(order) {
  if (order < 2 || order > 500) throw std::invalid_argument("series order out of range");
  const int n = order + 1;

  Series e4(n + 1, BigInt(0));
  e4[0] = 1;
  for (int m = 1; m <= n; ++m) e4[m] = 240 * sigma3(m);

  // Euler product prod (1 - q^m) via the pentagonal-number recurrence, then
  // the 24th power gives Delta / q.
  Series eul(n + 1, BigInt(0));
  eul[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Series next = eul;
    for (int i = 0; i + m <= n; ++i)
      if (eul[i] != 0) next[i + m] -= eul[i];
    eul = std::move(next);
  }
  Series delta(n + 1, BigInt(0));
  delta[0] = 1;
  for (int p = 0; p < 24; ++p) delta = series_mul(delta, eul, n);

  // j*q = E4^3 / (Delta/q); the leading coefficient 1 keeps division integral.
  Series num = series_mul(series_mul(e4, e4, n), e4, n);
  Series jq(n + 1, BigInt(0));
  for (int m = 0; m <= n; ++m) {
    BigInt acc = num[m];
    for (int k = 1; k <= m; ++k) acc -= delta[k] * jq[m - k];
    jq[m] = acc;
  }

  coeffs_.assign(jq.begin(), jq.begin() + order + 2);  // c(-1) .. c(order)
  coeffs_dbl_.reserve(coeffs_.size());
  for (const BigInt& c : coeffs_) coeffs_dbl_.push_back(c.convert_to<double>());
}

const JSeries& JSeries::standard() {
  static const JSeries s(40);
  return s;
}

const BigInt& JSeries::coeff(int n) const {
  if (n < -1 || n > order_) throw std::out_of_range("coefficient index out of range");
  return coeffs_[static_cast<std::size_t>(n + 1)];
}

std::complex<double> JSeries::eval_reduced(std::complex<double> z) const {
  const std::complex<double> q = std::exp(std::complex<double>(0.0, 2.0 * M_PI) * z);
  std::complex<double> s = 0.0;
  for (int m = order_; m >= 0; --m) s = s * q + coeffs_dbl_[static_cast<std::size_t>(m + 1)];
  return s + 1.0 / q;
}

DomainReduction reduce_to_fundamental_domain(std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half plane");
  UnimodularMatrix g;
  constexpr double kBoundaryTol = 1e-12;
  for (int it = 0; it < 100000; ++it) {
    const double n = std::nearbyint(z.real());
    if (n != 0.0) {
      z -= n;
      const BigInt nb = static_cast<long long>(n);
      g = UnimodularMatrix(1, -nb, 0, 1) * g;  // z -> z - n
    }
    const double r2 = std::norm(z);
    if (r2 >= 1.0 - kBoundaryTol) {
      if (std::abs(z.real()) > 0.5 + kBoundaryTol) continue;  // re-center once more
      return {z, g};
    }
    z = -std::conj(z) / r2;  // -1/z
    g = UnimodularMatrix(0, -1, 1, 0) * g;
  }
  throw std::runtime_error("fundamental-domain reduction did not terminate");
}

std::complex<double> j_eval(std::complex<double> z) {
  const DomainReduction r = reduce_to_fundamental_domain(z);
  return JSeries::standard().eval_reduced(r.z);
}

std::complex<double> mobius_apply(const UnimodularMatrix& m, std::complex<double> z) {
  const double a = m.a.convert_to<double>();
  const double b = m.b.convert_to<double>();
  const double c = m.c.convert_to<double>();
  const double d = m.d.convert_to<double>();
  return (a * z + b) / (c * z + d);
}

}  // namespace cyclint
