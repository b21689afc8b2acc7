#pragma once

#include "cyclint/modular_j.hpp"
#include "cyclint/surd.hpp"
#include "cyclint/word.hpp"

#include <complex>
#include <vector>

namespace cyclint {

// The differential (1/(z - xp) - 1/(z - x)) dz joining two distinct points of
// the extended real line. An infinite endpoint drops its term.
class EtaForm {
 public:
  static EtaForm finite(double xp, double x);
  static EtaForm infinity_to(double x);   // xp at infinity: -dz/(z - x)
  static EtaForm to_infinity(double xp);  // x at infinity: dz/(z - xp)

  bool xp_infinite() const { return xp_inf_; }
  bool x_infinite() const { return x_inf_; }
  double xp() const;
  double x() const;

  // Density with respect to dz at a point off the real axis.
  std::complex<double> operator()(std::complex<double> z) const;

 private:
  EtaForm(double xp, double x, bool xp_inf, bool x_inf);
  double xp_ = 0.0, x_ = 0.0;
  bool xp_inf_ = false, x_inf_ = false;
};

// Antiderivative difference log(z1-xp) - log(z1-x) - log(z0-xp) + log(z0-x),
// principal branch per term. Both z-x factors stay in one open half plane for
// z in the upper half plane, so the principal differences are the continuous
// ones.
std::complex<double> eta_integral_closed(std::complex<double> z0, std::complex<double> z1,
                                         const EtaForm& eta);

// cosh d = 1 + |z1 - z2|^2 / (2 Im z1 Im z2)
double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2);

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  int subdivisions = 0;  // deepest bisection level used
  bool cap_exceeded = false;
};

enum class PathKind { geodesic, chord };

// Integral of j(z) eta(z) dz (resp. eta(z) dz) from z0 to z1 along the
// hyperbolic geodesic arc (default) or the straight chord. The integrand is
// holomorphic off the real axis so the two paths agree; the arc keeps nodes
// higher when the endpoints hug the axis.
QuadratureResult integrate_j_eta(std::complex<double> z0, std::complex<double> z1,
                                 const EtaForm& eta, double tol,
                                 PathKind path = PathKind::geodesic);
QuadratureResult integrate_eta(std::complex<double> z0, std::complex<double> z1,
                               const EtaForm& eta, double tol, PathKind path = PathKind::geodesic);

// Closed-geodesic averages of j attached to a periodic continued fraction.
// val_tilde integrates j.eta over one primitive period; hats rescale by
// N(W)/pairs(W) so powers of a word report identical values.
struct CycleValues {
  std::complex<double> val_tilde{0.0, 0.0};
  double one_tilde = 0.0;  // 2 log eps, closed form
  std::complex<double> val{0.0, 0.0};
  std::complex<double> val_hat{0.0, 0.0};
  double one_hat = 0.0;
  double eps_hat = 0.0;
  double im_diagnostic = 0.0;  // |Im val_tilde|
};

CycleValues cycle_integrals(const EvenWord& W, double tol = 1e-10);

// Same contour as cycle_integrals with j replaced by 1, by quadrature; the
// closed form it should reproduce is 2 N log eps.
double one_tilde_quadrature(const EvenWord& W, double tol = 1e-10);

// Running averages (1/t) * integral of j over the geodesic ray toward the
// stream's value, sampled at segment boundaries until the arc length reaches
// `depth`. The ray starts on the geodesic joining -1 and the stream value, at
// circle parameter start_t (1 = apex). Requires a declared-periodic stream so
// every tail is an exact surd.
struct GeodesicEstimate {
  double length = 0.0;
  std::complex<double> average{0.0, 0.0};
};

struct GeodesicOptions {
  double start_t = 1.0;
  bool unit_integrand = false;  // replace j by 1; averages must be exactly 1
};

std::vector<GeodesicEstimate> geodesic_val(const WordStream& stream, double depth, double tol,
                                           const GeodesicOptions& opt = {});

}  // namespace cyclint
