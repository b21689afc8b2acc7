#pragma once

#include "cyclint/bigint.hpp"
#include "cyclint/word.hpp"

#include <string>
#include <vector>

namespace cyclint {

// Real quadratic irrational (P + sqrt(D))/Q with D > 0 non-square, Q != 0,
// and Q | D - P^2 so the quotient recursion stays integral.
class QuadraticSurd {
 public:
  QuadraticSurd(BigInt P, BigInt Q, BigInt D);

  const BigInt& P() const { return P_; }
  const BigInt& Q() const { return Q_; }
  const BigInt& D() const { return D_; }

  double value() const;
  double log_value() const;  // natural log; value must be positive
  QuadraticSurd conjugate() const;  // sqrt(D) -> -sqrt(D)
  BigInt floor() const;

  // (a*s + b) / (c*s + d), exact.
  QuadraticSurd mobius(const UnimodularMatrix& m) const;

  // Same real number, regardless of representation scale.
  bool same_value(const QuadraticSurd& o) const;

  std::string str() const;  // "(P+sqrt(D))/Q"

 private:
  BigInt P_, Q_, D_;
  void normalize();
};

// Attracting fixed point of word_matrix(W): the purely periodic value [W,W,...].
QuadraticSurd purely_periodic_value(const EvenWord& W);

// [V then W repeated] = word_matrix(V) applied to the purely periodic value.
QuadraticSurd eventually_periodic_value(const EvenWord& V, const EvenWord& W);

QuadraticSurd galois_conjugate(const QuadraticSurd& s);

// First n continued-fraction quotients of s.
std::vector<BigInt> cf_expand(const QuadraticSurd& s, std::size_t n);

struct QuadraticUnit {
  QuadraticSurd unit;   // c*w + d of the primitive word's matrix, an exact surd
  std::size_t exponent; // primitive exponent N of W
  double one_tilde;     // 2 log(unit)
  double one_hat;       // (N/|W|) * one_tilde
  double eps_hat;       // exp(one_hat / 2)
};

// Fundamental expanding unit attached to the periodic word, with the
// length-normalized growth rate.
QuadraticUnit epsilon_hat_quadratic(const EvenWord& W);

}  // namespace cyclint
