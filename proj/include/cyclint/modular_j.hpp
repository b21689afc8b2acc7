#pragma once

#include "cyclint/word.hpp"

#include <complex>
#include <vector>

namespace cyclint {

// q-expansion of the modular j-function with exact integer coefficients
// c(-1) = 1, c(0) = 744, c(1) = 196884, ...
class JSeries {
 public:
  explicit JSeries(int order);  // coefficients through q^order
  static const JSeries& standard();  // order 40, tail < 1e-20 in the fundamental domain

  int order() const { return order_; }
  const BigInt& coeff(int n) const;  // n in [-1, order]

  // Series value; z must already lie in the fundamental domain.
  std::complex<double> eval_reduced(std::complex<double> z) const;

 private:
  int order_;
  std::vector<BigInt> coeffs_;       // index n+1
  std::vector<double> coeffs_dbl_;
};

struct DomainReduction {
  std::complex<double> z;
  UnimodularMatrix g;  // g maps the input to z
};

// Translate/invert into |Re z| <= 1/2, |z| >= 1 (boundary tolerance 1e-12).
DomainReduction reduce_to_fundamental_domain(std::complex<double> z);

std::complex<double> j_eval(std::complex<double> z);

// (a z + b)/(c z + d) with exact integer entries, evaluated in double.
std::complex<double> mobius_apply(const UnimodularMatrix& m, std::complex<double> z);

}  // namespace cyclint
