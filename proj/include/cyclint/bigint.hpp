#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cyclint {

using BigInt = boost::multiprecision::cpp_int;

// Floor of sqrt(n), n >= 0.
inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  return boost::multiprecision::sqrt(n);
}

// Natural log of n > 0 via bit length plus leading 64-bit mantissa.
// Relative error is below 1e-14 regardless of magnitude.
inline double log_big(const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("log_big: argument must be positive");
  const unsigned bits = boost::multiprecision::msb(n);  // index of top bit
  if (bits <= 62) return std::log(n.convert_to<double>());
  const int shift = static_cast<int>(bits) - 62;
  const BigInt top = n >> shift;
  constexpr double ln2 = 0.6931471805599453094;
  return std::log(top.convert_to<double>()) + shift * ln2;
}

// num/den as double, correct to ~1 ulp for any operand magnitude whose
// quotient is representable. Keeps 64 significant bits before rounding.
inline double big_ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("big_ratio: zero denominator");
  if (num == 0) return 0.0;
  const int mn = static_cast<int>(boost::multiprecision::msb(boost::multiprecision::abs(num)));
  const int md = static_cast<int>(boost::multiprecision::msb(boost::multiprecision::abs(den)));
  const int shift = std::max(0, md - mn + 64);
  const BigInt q = (num << shift) / den;
  return std::ldexp(q.convert_to<double>(), -shift);
}

// Fractional part of sqrt(D) given s = isqrt(D): sqrt(D) = s + frac, frac in [0,1).
// Uses exact integer pieces. For large s the first-order estimate r/(2s) is
// already correct to a ulp; otherwise Newton steps on x^2 + 2sx - r = 0 finish
// the job (r <= 2s, so everything stays exactly representable).
inline double sqrt_frac(const BigInt& D, const BigInt& s) {
  const BigInt r = D - s * s;
  if (r == 0) return 0.0;
  double rho = big_ratio(r, 2 * s);
  if (boost::multiprecision::msb(s) <= 52) {
    const double rd = r.convert_to<double>();
    const double sd = s.convert_to<double>();
    for (int it = 0; it < 6; ++it) rho = (rho * rho + rd) / (2.0 * (sd + rho));
  }
  return rho;
}

}  // namespace cyclint
