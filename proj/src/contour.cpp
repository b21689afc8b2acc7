#include "cyclint/contour.hpp"

#include "cyclint/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyclint {

namespace {

constexpr int kGaussOrder = 16;
constexpr int kMaxBisections = 30;

struct GaussRule {
  double node[kGaussOrder];
  double weight[kGaussOrder];
};

// Nodes are the roots of the degree-16 Legendre polynomial, found by Newton
// iteration from the Chebyshev initial guesses; weights from the derivative.
GaussRule make_gauss_rule() {
  GaussRule g{};
  const int n = kGaussOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    g.node[i] = x;
    g.node[n - 1 - i] = -x;
    g.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    g.weight[n - 1 - i] = g.weight[i];
  }
  return g;
}

const GaussRule& gauss_rule() {
  static const GaussRule g = make_gauss_rule();
  return g;
}

template <class F>
std::complex<double> gauss_panel(const F& f, double a, double b) {
  const GaussRule& g = gauss_rule();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> s = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) s += g.weight[i] * f(mid + half * g.node[i]);
  return half * s;
}

// Accept a panel when one rule application agrees with its two halves; the
// halves are kept either way. Panels are visited left to right, so the
// accumulation order is deterministic. The relative floor stops subdivision
// once the discrepancy sits at the rounding noise of the panel's own
// magnitude, where further bisection cannot help.
template <class F>
void refine(const F& f, double a, double b, std::complex<double> whole, double tol, int depth,
            QuadratureResult& out) {
  const double mid = 0.5 * (a + b);
  const std::complex<double> left = gauss_panel(f, a, mid);
  const std::complex<double> right = gauss_panel(f, mid, b);
  const double delta = std::abs(left + right - whole);
  const double noise = 4e-15 * (std::abs(left) + std::abs(right));
  if (delta <= tol || delta <= noise || depth >= kMaxBisections) {
    out.value += left + right;
    out.error_estimate += delta;
    out.subdivisions = std::max(out.subdivisions, depth);
    if (delta > tol && delta > noise) out.cap_exceeded = true;
    return;
  }
  refine(f, a, mid, left, 0.5 * tol, depth + 1, out);
  refine(f, mid, b, right, 0.5 * tol, depth + 1, out);
}

template <class F>
QuadratureResult adaptive_integral(const F& f, double a, double b, double tol) {
  QuadratureResult out;
  if (a == b) return out;
  refine(f, a, b, gauss_panel(f, a, b), tol, 0, out);
  return out;
}

void require_interior(std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("integration endpoint on or below the real axis");
}

// Integral of factor(z) * eta(z) dz along the chosen path from z0 to z1.
template <class G>
QuadratureResult integrate_form(std::complex<double> z0, std::complex<double> z1,
                                const EtaForm& eta, double tol, PathKind path, const G& factor) {
  require_interior(z0);
  require_interior(z1);
  if (z0 == z1) return {};

  if (path == PathKind::chord) {
    const std::complex<double> d = z1 - z0;
    auto f = [&](double u) {
      const std::complex<double> z = z0 + u * d;
      return factor(z) * eta(z) * d;
    };
    return adaptive_integral(f, 0.0, 1.0, tol);
  }

  const double x0 = z0.real(), y0 = z0.imag();
  const double x1 = z1.real(), y1 = z1.imag();
  const double scale = std::max({1.0, std::abs(z0), std::abs(z1)});
  if (std::abs(x1 - x0) <= 1e-13 * scale) {
    // vertical geodesic, z = x + i e^u with u the arc length
    const double x = 0.5 * (x0 + x1);
    auto f = [&](double u) {
      const double y = std::exp(u);
      const std::complex<double> z(x, y);
      return factor(z) * eta(z) * std::complex<double>(0.0, y);
    };
    return adaptive_integral(f, std::log(y0), std::log(y1), tol);
  }

  // semicircular geodesic; s is the signed arc length from the apex and
  // z(s) = c + r(-tanh s + i sech s)
  const double c = 0.5 * (std::norm(z1) - std::norm(z0)) / (x1 - x0);
  const double r = std::hypot(x0 - c, y0);
  const double s0 = std::asinh((c - x0) / y0);
  const double s1 = std::asinh((c - x1) / y1);
  auto f = [&](double s) {
    const double sech = 1.0 / std::cosh(s), th = std::tanh(s);
    const std::complex<double> z(c - r * th, r * sech);
    const std::complex<double> dz = -r * sech * std::complex<double>(sech, th);
    return factor(z) * eta(z) * dz;
  };
  return adaptive_integral(f, s0, s1, tol);
}

}  // namespace

EtaForm::EtaForm(double xp, double x, bool xp_inf, bool x_inf)
    : xp_(xp), x_(x), xp_inf_(xp_inf), x_inf_(x_inf) {
  if (xp_inf && x_inf) throw std::invalid_argument("both endpoints at infinity");
  if (!xp_inf && !x_inf && xp == x) throw std::invalid_argument("endpoints must be distinct");
  if ((!xp_inf && !std::isfinite(xp)) || (!x_inf && !std::isfinite(x)))
    throw std::invalid_argument("endpoint is not finite");
}

EtaForm EtaForm::finite(double xp, double x) { return EtaForm(xp, x, false, false); }
EtaForm EtaForm::infinity_to(double x) { return EtaForm(0.0, x, true, false); }
EtaForm EtaForm::to_infinity(double xp) { return EtaForm(xp, 0.0, false, true); }

double EtaForm::xp() const {
  if (xp_inf_) throw std::logic_error("endpoint at infinity has no coordinate");
  return xp_;
}

double EtaForm::x() const {
  if (x_inf_) throw std::logic_error("endpoint at infinity has no coordinate");
  return x_;
}

std::complex<double> EtaForm::operator()(std::complex<double> z) const {
  std::complex<double> v = 0.0;
  if (!xp_inf_) v += 1.0 / (z - xp_);
  if (!x_inf_) v -= 1.0 / (z - x_);
  return v;
}

std::complex<double> eta_integral_closed(std::complex<double> z0, std::complex<double> z1,
                                         const EtaForm& eta) {
  require_interior(z0);
  require_interior(z1);
  auto term = [&](std::complex<double> z) {
    std::complex<double> t = 0.0;
    if (!eta.xp_infinite()) t += std::log(z - eta.xp());
    if (!eta.x_infinite()) t -= std::log(z - eta.x());
    return t;
  };
  return term(z1) - term(z0);
}

double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2) {
  require_interior(z1);
  require_interior(z2);
  const double a = 1.0 + std::norm(z1 - z2) / (2.0 * z1.imag() * z2.imag());
  return std::acosh(std::max(1.0, a));
}

QuadratureResult integrate_j_eta(std::complex<double> z0, std::complex<double> z1,
                                 const EtaForm& eta, double tol, PathKind path) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return integrate_form(z0, z1, eta, tol, path, [](std::complex<double> z) { return j_eval(z); });
}

QuadratureResult integrate_eta(std::complex<double> z0, std::complex<double> z1,
                               const EtaForm& eta, double tol, PathKind path) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return integrate_form(z0, z1, eta, tol, path,
                        [](std::complex<double>) { return std::complex<double>(1.0, 0.0); });
}

namespace {

// One period of the closed contour, telescoped pair by pair: the piece from
// G_{m} i to G_{m+1} i pulls back to the segment i .. (pair matrix) i against
// the rotated word's fixed points, which stay exact surds. This keeps every
// quadrature endpoint at height ~ 1/(k^2+1) instead of the exponentially thin
// Im(G_m i).
template <class G>
std::complex<double> cycle_sum(const EvenWord& W, double tol, const G& factor) {
  const std::size_t r = W.pairs();
  const std::complex<double> z0(0.0, 1.0);
  const double tol_m = tol / static_cast<double>(r);
  std::complex<double> total = 0.0;
  for (std::size_t m = 0; m < r; ++m) {
    const QuadraticSurd wm = purely_periodic_value(W.rotated_pairs(m));
    const EtaForm eta = EtaForm::finite(wm.conjugate().value(), wm.value());
    const std::complex<double> z1 = mobius_apply(word_matrix(W.pair_at(m + 1)), z0);
    const QuadratureResult q =
        integrate_form(z0, z1, eta, tol_m, PathKind::geodesic, factor);
    if (q.cap_exceeded)
      throw std::runtime_error("quadrature subdivision cap exceeded in cycle integral");
    total += q.value;
  }
  return total;
}

}  // namespace

CycleValues cycle_integrals(const EvenWord& W, double tol) {
  if (W.empty()) throw std::invalid_argument("cycle integrals need a non-empty word");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const QuadraticUnit unit = epsilon_hat_quadratic(W);
  const std::complex<double> total =
      cycle_sum(W, tol, [](std::complex<double> z) { return j_eval(z); });

  CycleValues out;
  out.val_tilde = total / static_cast<double>(unit.exponent);
  out.one_tilde = unit.one_tilde;
  out.val = out.val_tilde / out.one_tilde;
  out.val_hat = total / static_cast<double>(W.pairs());
  out.one_hat = unit.one_hat;
  out.eps_hat = unit.eps_hat;
  out.im_diagnostic = std::abs(out.val_tilde.imag());
  return out;
}

double one_tilde_quadrature(const EvenWord& W, double tol) {
  if (W.empty()) throw std::invalid_argument("cycle integrals need a non-empty word");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const std::size_t N = primitive_exponent(W);
  const std::complex<double> total =
      cycle_sum(W, tol, [](std::complex<double>) { return std::complex<double>(1.0, 0.0); });
  return total.real() / static_cast<double>(N);
}

std::vector<GeodesicEstimate> geodesic_val(const WordStream& stream, double depth, double tol,
                                           const GeodesicOptions& opt) {
  if (!stream.has_declared_period())
    throw std::invalid_argument("geodesic averages need a declared-periodic stream");
  if (!(depth > 0.0)) throw std::invalid_argument("depth must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(opt.start_t > 0.0)) throw std::invalid_argument("start parameter must be positive");

  const std::size_t pre = stream.preperiod_pairs();
  const std::size_t per = stream.period_pairs();
  std::vector<int> pe;
  pe.reserve(2 * per);
  for (std::size_t i = 0; i < 2 * per; ++i) pe.push_back(stream.entry(2 * pre + i));
  const EvenWord period(std::move(pe));

  // Exact value of [pair_{m+1}, pair_{m+2}, ...].
  auto tail_surd = [&](std::size_t m) {
    if (m >= pre) return purely_periodic_value(period.rotated_pairs((m - pre) % per));
    std::vector<int> v;
    v.reserve(2 * (pre - m));
    for (std::size_t i = 2 * m; i < 2 * pre; ++i) v.push_back(stream.entry(i));
    return eventually_periodic_value(EvenWord(std::move(v)), period);
  };
  // Left end of the m-th pulled-back geodesic: Gamma_m^{-1}(-1), exact.
  auto left_end = [](const UnimodularMatrix& g) {
    return g.identity() ? -1.0 : -big_ratio(g.d + g.b, g.c + g.a);
  };

  const std::size_t max_segments = static_cast<std::size_t>(depth / 0.25) + 16;
  std::vector<GeodesicEstimate> out;
  UnimodularMatrix gamma;  // prefix through pair m-1
  double t_from = opt.start_t;
  double length = 0.0;
  std::complex<double> integral = 0.0;

  for (std::size_t m = 1; length < depth; ++m) {
    if (m > max_segments) throw std::runtime_error("geodesic segmentation failed to advance");
    const double x = tail_surd(m - 1).value();
    const double xp = left_end(gamma);

    // Pull the next tail geodesic's apex onto this one; its circle parameter
    // bounds the segment.
    const UnimodularMatrix pair = word_matrix(stream.pair(m));
    const UnimodularMatrix next = gamma * pair;
    const double xn = tail_surd(m).value();
    const double xpn = left_end(next);
    const std::complex<double> apex(0.5 * (xn + xpn), 0.5 * (xn - xpn));
    const std::complex<double> w = mobius_apply(pair, apex);
    const std::complex<double> z = (w - xp) / (x - w);  // = sigma^{-1}(w), on the imaginary axis
    const double t_to = std::abs(z);
    if (!(t_to > 0.0) || std::abs(z.real()) > 1e-6 * t_to)
      throw std::runtime_error("geodesic parameter drifted off the imaginary axis");

    auto f = [&](double s) -> std::complex<double> {
      const std::complex<double> it(0.0, std::exp(s));
      const std::complex<double> zz = (x * it + xp) / (it + 1.0);
      return opt.unit_integrand ? 1.0 : j_eval(zz);
    };
    const double sa = std::log(t_from), sb = std::log(t_to);
    const QuadratureResult q = adaptive_integral(f, sa, sb, tol);
    if (q.cap_exceeded)
      throw std::runtime_error("quadrature subdivision cap exceeded on a geodesic segment");

    integral += q.value;
    length += sb - sa;
    out.push_back({length, integral / length});
    gamma = next;
    t_from = 1.0;
  }
  return out;
}

}  // namespace cyclint
