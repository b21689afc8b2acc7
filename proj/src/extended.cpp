#include "cyclint/extended.hpp"

#include "cyclint/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace cyclint {

namespace {

// Static strided split over worker threads; results must be written to
// index-addressed slots so the merge order never depends on scheduling.
template <class F>
void parallel_for_index(std::size_t count, unsigned threads, const F& f) {
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? hw : 1;
  }
  const unsigned t_count = static_cast<unsigned>(
      std::min<std::size_t>(threads, count ? count : 1));
  if (t_count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t_count);
  pool.reserve(t_count);
  for (unsigned t = 0; t < t_count; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += t_count) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

double complex_spread(const std::vector<std::complex<double>>& v, std::size_t first,
                      std::size_t last) {
  double w = 0.0;
  for (std::size_t i = first; i < last; ++i)
    for (std::size_t j = i + 1; j < last; ++j) w = std::max(w, std::abs(v[i] - v[j]));
  return w;
}

std::complex<double> window_mean(const std::vector<std::complex<double>>& v, std::size_t first,
                                 std::size_t last) {
  std::complex<double> s = 0.0;
  for (std::size_t i = first; i < last; ++i) s += v[i];
  return s / static_cast<double>(last - first);
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::bounded_oscillation: return "bounded-oscillation";
    case Verdict::undetermined: return "undetermined";
  }
  throw std::logic_error("unknown verdict");
}

ConvergenceReport accumulate_extended(const WordStream& stream, std::size_t n_max, double tol,
                                      const AccumulateOptions& opt) {
  if (n_max < 1) throw std::invalid_argument("step count must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(opt.z0.imag() > 0.0))
    throw std::invalid_argument("base point must lie in the upper half plane");
  if (opt.cauchy_window < 2) throw std::invalid_argument("window must cover at least two steps");
  if (opt.tail_quotients < 2) throw std::invalid_argument("tail needs at least two quotients");

  const bool by_pairs = opt.grouping == Grouping::pairs;
  if (stream.finite()) {
    const std::size_t have =
        by_pairs ? stream.pairs_through_word(stream.word_count()) : stream.word_count();
    if (n_max > have) throw std::runtime_error("stream exhausted before the requested step count");
  }

  struct Step {
    std::complex<double> z1;
    double xp = 0.0;
    bool xp_inf = false;
    double tail = 0.0;
    std::size_t entries = 0;
  };
  std::vector<Step> steps(n_max);
  std::vector<std::complex<double>> eta_inc(n_max);
  ConvergenceReport rep;

  // Exact sequential pass: prefix matrices, pulled-back endpoints, closed-form
  // eta increments. Everything the parallel quadratures need is frozen here.
  {
    UnimodularMatrix prefix;
    std::size_t entry_at = 0;
    for (std::size_t m = 0; m < n_max; ++m) {
      const EvenWord block = by_pairs ? stream.pair(m + 1) : stream.word(m + 1);
      Step& s = steps[m];
      s.entries = block.size();
      if (opt.pull_back_minus_one) {
        s.xp = prefix.identity() ? -1.0 : -big_ratio(prefix.d + prefix.b, prefix.c + prefix.a);
      } else if (prefix.identity()) {
        s.xp_inf = true;
      } else {
        s.xp = -big_ratio(prefix.d, prefix.c);
      }
      s.tail = stream.tail_value(entry_at, opt.tail_quotients);
      const UnimodularMatrix g = word_matrix(block);
      s.z1 = mobius_apply(g, opt.z0);
      const EtaForm eta =
          s.xp_inf ? EtaForm::infinity_to(s.tail) : EtaForm::finite(s.xp, s.tail);
      eta_inc[m] = eta_integral_closed(opt.z0, s.z1, eta);
      if (!s.xp_inf) rep.max_pullback = std::max(rep.max_pullback, std::abs(s.xp));
      rep.max_pullback = std::max(rep.max_pullback, std::abs(s.tail));
      prefix = prefix * g;
      entry_at += s.entries;
    }
  }

  std::vector<std::complex<double>> j_inc(n_max);
  std::vector<char> cap(n_max, 0);
  parallel_for_index(n_max, opt.threads, [&](std::size_t m) {
    const Step& s = steps[m];
    const EtaForm eta = s.xp_inf ? EtaForm::infinity_to(s.tail) : EtaForm::finite(s.xp, s.tail);
    const QuadratureResult q = integrate_j_eta(opt.z0, s.z1, eta, tol);
    j_inc[m] = q.value;
    cap[m] = q.cap_exceeded ? 1 : 0;
  });
  for (std::size_t m = 0; m < n_max; ++m)
    if (cap[m])
      throw std::runtime_error("quadrature subdivision cap exceeded at step " +
                               std::to_string(m + 1));

  std::vector<std::complex<double>> sum_j(n_max + 1), sum_e(n_max + 1);
  std::vector<double> half(n_max + 1, 0.0);
  rep.rows.resize(n_max);
  std::size_t entries = 0;
  for (std::size_t m = 0; m < n_max; ++m) {
    sum_j[m + 1] = sum_j[m] + j_inc[m];
    sum_e[m + 1] = sum_e[m] + eta_inc[m];
    entries += steps[m].entries;
    half[m + 1] = 0.5 * static_cast<double>(entries);
    PartialRow& r = rep.rows[m];
    r.n = m + 1;
    r.sum_len = entries;
    r.val_hat = sum_j[m + 1] / half[m + 1];
    r.one_hat = sum_e[m + 1] / half[m + 1];
    r.eps_hat = std::exp(0.5 * r.one_hat.real());
    rep.max_im_part = std::max(rep.max_im_part, std::abs(r.val_hat.imag()));
  }
  rep.mean_block_half_length = half[n_max] / static_cast<double>(n_max);

  // Estimator at prefix n: for a declared-periodic stream under pair grouping,
  // the mean increment over a trailing whole number of periods (the leading
  // burn-in decays geometrically, so this removes the O(1/n) offset of the raw
  // average); otherwise the raw average itself.
  const bool aligned = by_pairs && stream.has_declared_period();
  const std::size_t rho = aligned ? stream.period_pairs() : 0;
  const std::size_t pre = aligned ? stream.preperiod_pairs() : 0;
  auto estimate = [&](const std::vector<std::complex<double>>& sum, std::size_t n) {
    if (aligned && n > pre) {
      const std::size_t avail = n - pre;
      std::size_t k = rho * std::max<std::size_t>(1, avail / (2 * rho));
      if (k > avail) k = avail;
      if (k >= 1) return (sum[n] - sum[n - k]) / (half[n] - half[n - k]);
    }
    return sum[n] / half[n];
  };

  rep.val_hat = estimate(sum_j, n_max);
  rep.one_hat = estimate(sum_e, n_max);
  rep.eps_hat = std::exp(0.5 * rep.one_hat.real());
  if (std::abs(rep.one_hat) > 1e-6) rep.val = rep.val_hat / rep.one_hat;

  const std::size_t k = opt.cauchy_window;
  if (n_max >= k) {
    std::vector<std::complex<double>> ev, eo;
    ev.reserve(k);
    eo.reserve(k);
    for (std::size_t n = n_max - k + 1; n <= n_max; ++n) {
      ev.push_back(estimate(sum_j, n));
      eo.push_back(estimate(sum_e, n));
    }
    const double wv = complex_spread(ev, 0, ev.size());
    const double wo = complex_spread(eo, 0, eo.size());
    rep.cauchy_window_width = std::max(wv, wo);
    if (n_max < 2 * k) {
      rep.verdict = Verdict::undetermined;
    } else {
      const bool ok_v = wv < tol * std::max(1.0, std::abs(window_mean(ev, 0, ev.size())));
      const bool ok_o = wo < tol * std::max(1.0, std::abs(window_mean(eo, 0, eo.size())));
      rep.verdict = (ok_v && ok_o) ? Verdict::converged : Verdict::bounded_oscillation;
    }
  } else {
    rep.verdict = Verdict::undetermined;
  }
  return rep;
}

std::vector<DenominatorEstimate> epsilon_hat_denominators(const WordStream& stream,
                                                          std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("step count must be positive");
  if (stream.finite() && n_max > stream.pairs_through_word(stream.word_count()))
    throw std::runtime_error("stream exhausted before the requested step count");

  const bool aligned = stream.has_declared_period();
  const std::size_t rho = aligned ? stream.period_pairs() : 0;
  const std::size_t pre = aligned ? stream.preperiod_pairs() : 0;

  std::vector<DenominatorEstimate> out(n_max);
  std::vector<double> logs(n_max + 1, 0.0);
  UnimodularMatrix g;
  for (std::size_t m = 1; m <= n_max; ++m) {
    g = g * word_matrix(stream.pair(m));
    logs[m] = log_big(g.c);
    DenominatorEstimate& e = out[m - 1];
    e.n = m;
    e.log_c = logs[m];
    e.root = std::exp(logs[m] / static_cast<double>(m));
    std::size_t s = 0;
    if (aligned && m > pre) {
      const std::size_t avail = m - pre;
      s = rho * std::max<std::size_t>(1, avail / (2 * rho));
      if (s > avail) s = avail;
      if (s >= m) s = 0;  // the earlier denominator must exist
    } else if (!aligned && m >= 2) {
      s = m / 2;
    }
    e.ratio = s ? std::exp((logs[m] - logs[m - s]) / static_cast<double>(s)) : e.root;
    e.estimate = (aligned && s) ? e.ratio : e.root;
  }
  return out;
}

SchemeReference theorem1_reference(const std::vector<StreamComponent>& components, double tol) {
  if (components.empty()) throw std::invalid_argument("scheme needs at least one component");
  SchemeReference out;
  out.weights = scheme_weights(components);
  std::complex<double> val_mass = 0.0;
  double one_mass = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (out.weights[i] == 0.0) continue;
    const CycleValues cv = cycle_integrals(components[i].W, tol);
    const double w = out.weights[i] * static_cast<double>(components[i].W.pairs());
    val_mass += w * cv.val_hat;
    one_mass += w * cv.one_hat;
    mass += w;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("scheme weights are degenerate");
  out.val_hat = val_mass / mass;
  out.one_hat = one_mass / mass;
  out.val = out.val_hat / out.one_hat;
  return out;
}

std::vector<MorphismEstimate> thue_morse_estimates(const EvenWord& V, const EvenWord& W,
                                                   int n_max, double tol) {
  if (V.empty() || W.empty()) throw std::invalid_argument("morphism needs non-empty words");
  if (n_max < 0 || n_max > 5)
    throw std::invalid_argument("morphism estimate depth exceeds the size cap");
  std::vector<MorphismEstimate> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const EvenWord word = thue_morse_prefix(V, W, 2 * n);
    if (word.pairs() > (std::size_t{1} << 16))
      throw std::invalid_argument("morphism word exceeds the size cap");
    const CycleValues cv = cycle_integrals(word, tol);
    out.push_back({n, word.pairs(), cv.val_hat, cv.one_hat, cv.val});
  }
  return out;
}

LevyResult levy_monte_carlo(std::size_t trials, std::size_t depth, unsigned bits,
                            std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  if (bits < 64 || bits > (1u << 20)) throw std::invalid_argument("bit size out of range");
  // ~1.72 bits are consumed per extracted quotient on average; keep headroom.
  if (3.5 * static_cast<double>(depth) > static_cast<double>(bits))
    throw std::invalid_argument("depth too large for the bit budget");

  LevyResult out;
  out.statistics.assign(trials, 0.0);
  parallel_for_index(trials, threads, [&](std::size_t t) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(t) + 1);
    s ^= s >> 30;
    s *= 0xBF58476D1CE4E5B9ull;
    s ^= s >> 27;
    s *= 0x94D049BB133111EBull;
    s ^= s >> 31;
    std::mt19937_64 rng(s);

    BigInt p = 0;
    for (unsigned w = 0; w < (bits + 63) / 64; ++w) p |= BigInt(rng()) << (64 * w);
    p &= (BigInt(1) << bits) - 1;
    if (p == 0) p = 1;

    // x = p / 2^bits; quotients of [0; a1, a2, ...] by exact division, and
    // q_k = a_k q_{k-1} + q_{k-2} for the convergent denominators.
    BigInt u = BigInt(1) << bits, v = p;
    BigInt q_prev = 0, q_cur = 1;
    for (std::size_t k = 0; k < 2 * depth; ++k) {
      if (v == 0)
        throw std::runtime_error("continued fraction exhausted before the requested depth");
      const BigInt a = u / v;
      const BigInt r = u % v;
      u = v;
      v = r;
      const BigInt q_next = a * q_cur + q_prev;
      q_prev = q_cur;
      q_cur = q_next;
    }
    out.statistics[t] = log_big(q_cur) / static_cast<double>(depth);
  });

  double sum = 0.0;
  for (double sx : out.statistics) sum += sx;
  out.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double sx : out.statistics) ss += (sx - out.mean) * (sx - out.mean);
    out.stderr_of_mean = std::sqrt(ss / (static_cast<double>(trials) * (trials - 1.0)));
  }
  return out;
}

std::vector<std::complex<double>> repetition_residuals(const EvenWord& V,
                                                       const std::vector<std::size_t>& a_sequence,
                                                       double tol,
                                                       const RepetitionOptions& opt) {
  if (V.empty()) throw std::invalid_argument("repetition word must be non-empty");
  if (a_sequence.empty()) throw std::invalid_argument("schedule must be non-empty");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(opt.z0.imag() > 0.0))
    throw std::invalid_argument("base point must lie in the upper half plane");
  std::size_t a_max = 0;
  for (std::size_t a : a_sequence) {
    if (a < 1 || a > 4096) throw std::invalid_argument("repetition count out of range");
    a_max = std::max(a_max, a);
  }

  const UnimodularMatrix gv = word_matrix(V);
  const UnimodularMatrix gvi = gv.inverse();
  const QuadraticSurd xt = purely_periodic_value(opt.tail);
  const QuadraticSurd xl = purely_periodic_value(opt.left).mobius(UnimodularMatrix(0, -1, 1, 0));
  const std::complex<double> z1 = mobius_apply(gv, opt.z0);
  const std::complex<double> vhat = cycle_integrals(V, tol).val_hat;
  const double rv = static_cast<double>(V.pairs());

  // Powers applied once to the small fixed surds keep the discriminants from
  // compounding across iterated maps.
  std::vector<UnimodularMatrix> fwd(a_max + 1), inv(a_max + 1);
  for (std::size_t j = 1; j <= a_max; ++j) {
    fwd[j] = fwd[j - 1] * gv;
    inv[j] = inv[j - 1] * gvi;
  }

  std::vector<std::complex<double>> out;
  out.reserve(a_sequence.size());
  for (std::size_t a : a_sequence) {
    std::complex<double> total = 0.0;
    const double tol_m = tol / static_cast<double>(a);
    for (std::size_t m = 1; m <= a; ++m) {
      const double xp = xl.mobius(inv[m - 1]).value();
      const double x = xt.mobius(fwd[a - m + 1]).value();
      const QuadratureResult q =
          integrate_j_eta(opt.z0, z1, EtaForm::finite(xp, x), tol_m);
      if (q.cap_exceeded)
        throw std::runtime_error("quadrature subdivision cap exceeded in a repetition block");
      total += q.value;
    }
    out.push_back(total - static_cast<double>(a) * rv * vhat);
  }
  return out;
}

}  // namespace cyclint
