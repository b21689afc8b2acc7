#pragma once

#include "cyclint/contour.hpp"
#include "cyclint/surd.hpp"
#include "cyclint/word.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cyclint {

enum class Verdict { converged, bounded_oscillation, undetermined };

std::string verdict_name(Verdict v);

// Raw running averages after each step: val_hat = (sum of j.eta increments)
// divided by the half-length (pairs consumed), one_hat likewise from the
// closed-form eta increments.
struct PartialRow {
  std::size_t n = 0;        // blocks consumed
  std::size_t sum_len = 0;  // quotients consumed
  std::complex<double> val_hat{0.0, 0.0};
  std::complex<double> one_hat{0.0, 0.0};
  double eps_hat = 0.0;  // exp(Re one_hat / 2)
};

enum class Grouping { pairs, words };

struct AccumulateOptions {
  std::complex<double> z0{0.0, 1.0};
  // Pull the second endpoint back from -1 instead of infinity. Changes the
  // increments by a summable perturbation, so the limits agree.
  bool pull_back_minus_one = false;
  Grouping grouping = Grouping::pairs;
  std::size_t tail_quotients = 60;
  std::size_t cauchy_window = 10;
  unsigned threads = 1;
};

struct ConvergenceReport {
  std::vector<PartialRow> rows;
  Verdict verdict = Verdict::undetermined;
  double cauchy_window_width = 0.0;  // spread of the estimator over the last window

  // Final estimates. For a declared-periodic stream (pair grouping) these are
  // means of the increments over a trailing whole number of periods, which
  // sheds the O(1/n) offset of the raw averages; otherwise the last raw row.
  std::complex<double> val_hat{0.0, 0.0};
  std::complex<double> one_hat{0.0, 0.0};
  double eps_hat = 0.0;
  std::optional<std::complex<double>> val;  // val_hat / one_hat when |one_hat| > 1e-6

  double max_pullback = 0.0;         // largest |pulled-back endpoint| seen
  double max_im_part = 0.0;          // largest |Im val_hat_n| over the rows
  double mean_block_half_length = 0.0;  // pairs per block, averaged
};

// Telescoped partial averages of integral of j.eta (and of eta) over the
// stream prefix, one increment per block: the piece from G_{m-1} z0 to
// G_m z0 is pulled back by the exact prefix matrix, leaving a short segment
// against the pulled-back endpoints (tail value of the remaining stream and
// the exact rational image of the second endpoint).
ConvergenceReport accumulate_extended(const WordStream& stream, std::size_t n_max, double tol,
                                      const AccumulateOptions& opt = {});

// Growth of the exact prefix-matrix denominators c_n. root is exp(log c_n/n);
// ratio is the tail-aligned variant exp((log c_n - log c_{n-s})/s), which for
// declared-periodic streams (s a multiple of the period) converges
// geometrically instead of at O(1/n). estimate picks ratio when the alignment
// is available, root otherwise.
struct DenominatorEstimate {
  std::size_t n = 0;
  double log_c = 0.0;
  double root = 0.0;
  double ratio = 0.0;
  double estimate = 0.0;
};

std::vector<DenominatorEstimate> epsilon_hat_denominators(const WordStream& stream,
                                                          std::size_t n_max);

// Weighted limit values of the concatenation scheme: each component's closed
// cycle contributes its hat values with the scheme's limiting occupation
// weight times its pair count.
struct SchemeReference {
  std::vector<double> weights;
  std::complex<double> val_hat{0.0, 0.0};
  double one_hat = 0.0;
  std::complex<double> val{0.0, 0.0};
};

SchemeReference theorem1_reference(const std::vector<StreamComponent>& components,
                                   double tol = 1e-10);

// Hat cycle values of the doubling-morphism words h^(2n)(V); the hat
// normalization absorbs the 4^n length growth, so rows are comparable.
struct MorphismEstimate {
  int n = 0;
  std::size_t word_pairs = 0;
  std::complex<double> val_hat{0.0, 0.0};
  double one_hat = 0.0;
  std::complex<double> val{0.0, 0.0};
};

std::vector<MorphismEstimate> thue_morse_estimates(const EvenWord& V, const EvenWord& W,
                                                   int n_max, double tol = 1e-10);

// Growth statistic log(q_{2 depth}) / depth of convergent denominators of
// random dyadic rationals p / 2^bits, extracted by exact Euclidean division.
// The limit for almost every real is pi^2 / (6 log 2). Deterministic for a
// fixed seed, independent of the thread count.
struct LevyResult {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::vector<double> statistics;  // one per trial, in trial order
};

LevyResult levy_monte_carlo(std::size_t trials, std::size_t depth, unsigned bits,
                            std::uint64_t seed, unsigned threads = 1);

// Residuals I_n = integral from z0 to gamma_V^{a_n} z0 of j.eta minus the
// linear growth a_n * pairs(V) * val_hat(v). The second eta endpoint is the
// value [V^{a_n}, tail repeated]; the first is -1/[left repeated]. Bounded
// residuals witness the linear growth law.
struct RepetitionOptions {
  EvenWord tail{std::vector<int>{2, 2}};
  EvenWord left{std::vector<int>{3, 3}};
  std::complex<double> z0{0.0, 1.0};
};

std::vector<std::complex<double>> repetition_residuals(const EvenWord& V,
                                                       const std::vector<std::size_t>& a_sequence,
                                                       double tol,
                                                       const RepetitionOptions& opt = {});

}  // namespace cyclint
