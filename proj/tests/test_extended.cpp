#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cyclint/extended.hpp"
#include "cyclint/contour.hpp"
#include "cyclint/surd.hpp"
#include "cyclint/word.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

using namespace cyclint;
using cplx = std::complex<double>;

TEST_CASE("extended averages recover the golden-word limits") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("1,1"));
  ConvergenceReport r = accumulate_extended(s, 200, 1e-10);
  REQUIRE(r.rows.size() == 200);
  CHECK(r.verdict == Verdict::converged);

  CycleValues cyc = cycle_integrals(EvenWord::parse("1,1"), 1e-10);
  CHECK(std::abs(r.one_hat.real() - 1.9248473002384139) < 1e-6);
  CHECK(std::abs(r.one_hat.imag()) < 1e-8);
  CHECK(r.eps_hat == doctest::Approx(2.618033988749895).epsilon(1e-6));
  CHECK(std::abs(r.val_hat - cyc.val_hat) < 1e-5 * std::abs(cyc.val_hat));
  REQUIRE(r.val.has_value());
  CHECK(std::abs(*r.val - cyc.val) < 1e-5 * std::abs(cyc.val));

  // Raw rows: indices, lengths, and boundedness of the imaginary part.
  CHECK(r.rows.front().n == 1);
  CHECK(r.rows.front().sum_len == 2);
  CHECK(r.rows.back().n == 200);
  CHECK(r.rows.back().sum_len == 400);
  // Early partial sums carry an O(1) imaginary transient; the running average
  // sheds it like 1/n and the aligned estimator sheds it geometrically.
  CHECK(r.max_im_part < 1e3);
  CHECK(std::abs(r.rows.back().val_hat.imag()) < r.max_im_part / 50.0 + 1e-9);
  CHECK(std::abs(r.val_hat.imag()) < 1e-7);
  CHECK(r.mean_block_half_length == doctest::Approx(1.0));
  // The raw averages themselves are within O(1/n) of the limit.
  CHECK(std::abs(r.rows.back().val_hat - cyc.val_hat) < 0.05 * std::abs(cyc.val_hat));
}

TEST_CASE("periodic streams with a preperiod land on the same limits") {
  WordStream plain = WordStream::periodic(EvenWord(), EvenWord::parse("2,1"));
  WordStream shifted = WordStream::periodic(EvenWord::parse("5,3,4,1"), EvenWord::parse("2,1"));
  ConvergenceReport a = accumulate_extended(plain, 150, 1e-9);
  ConvergenceReport b = accumulate_extended(shifted, 150, 1e-9);
  CHECK(std::abs(a.one_hat - b.one_hat) < 1e-5);
  CHECK(std::abs(a.val_hat - b.val_hat) < 1e-4 * (1.0 + std::abs(a.val_hat)));
  CycleValues cyc = cycle_integrals(EvenWord::parse("2,1"), 1e-10);
  CHECK(std::abs(a.val_hat - cyc.val_hat) < 1e-5 * std::abs(cyc.val_hat));
  CHECK(std::abs(a.one_hat.real() - cyc.one_hat) < 1e-6);
}

TEST_CASE("word grouping and pair grouping agree in the limit") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("1,2,1,1"));
  AccumulateOptions by_words;
  by_words.grouping = Grouping::words;
  ConvergenceReport pw = accumulate_extended(s, 120, 1e-9, by_words);
  ConvergenceReport pp = accumulate_extended(s, 240, 1e-9);
  CHECK(pw.mean_block_half_length == doctest::Approx(2.0));
  CHECK(pp.mean_block_half_length == doctest::Approx(1.0));
  CHECK(std::abs(pw.rows.back().val_hat - pp.rows.back().val_hat) <
        0.02 * (1.0 + std::abs(pp.rows.back().val_hat)));
  // The word-grouped final is the raw last row, so it still carries an O(1/n)
  // transient; the pair-grouped one is period-aligned and essentially exact.
  CHECK(std::abs(pw.one_hat - pp.one_hat) < 2e-2);
}

TEST_CASE("pulling back from -1 instead of infinity changes nothing in the limit") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("2,2"));
  AccumulateOptions alt;
  alt.pull_back_minus_one = true;
  ConvergenceReport a = accumulate_extended(s, 150, 1e-9);
  ConvergenceReport b = accumulate_extended(s, 150, 1e-9, alt);
  CHECK(std::abs(a.val_hat - b.val_hat) < 1e-4 * (1.0 + std::abs(a.val_hat)));
  CHECK(std::abs(a.one_hat - b.one_hat) < 1e-5);
  // Endpoints stay bounded: tails below alphabet+1, pullbacks inside [-1, 0].
  CHECK(b.max_pullback <= 3.0);
  CHECK(a.max_pullback <= 3.0);
}

TEST_CASE("base point invariance") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("3,1"));
  AccumulateOptions moved;
  moved.z0 = cplx(0.4, 1.7);
  ConvergenceReport a = accumulate_extended(s, 120, 1e-9);
  ConvergenceReport b = accumulate_extended(s, 120, 1e-9, moved);
  CHECK(std::abs(a.val_hat - b.val_hat) < 1e-4 * (1.0 + std::abs(a.val_hat)));
  CHECK(std::abs(a.one_hat - b.one_hat) < 1e-5);
}

TEST_CASE("thread count does not change the report") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("1,1,2,2"));
  AccumulateOptions par;
  par.threads = 4;
  ConvergenceReport a = accumulate_extended(s, 60, 1e-9);
  ConvergenceReport b = accumulate_extended(s, 60, 1e-9, par);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].val_hat == b.rows[i].val_hat);
    CHECK(a.rows[i].one_hat == b.rows[i].one_hat);
  }
  CHECK(a.val_hat == b.val_hat);
}

TEST_CASE("finite streams exhaust with a verdict instead of fabricating rows") {
  WordStream s = WordStream::from_words({EvenWord::parse("1,1"), EvenWord::parse("2,2")});
  CHECK_THROWS_AS(accumulate_extended(s, 50, 1e-9), std::runtime_error);
  AccumulateOptions by_words;
  by_words.grouping = Grouping::words;
  ConvergenceReport r = accumulate_extended(s, 2, 1e-9, by_words);
  CHECK(r.rows.size() == 2);
  CHECK(r.verdict == Verdict::undetermined);  // far below any window
}

TEST_CASE("input validation") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("1,1"));
  CHECK_THROWS_AS(accumulate_extended(s, 0, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(accumulate_extended(s, 10, -1.0), std::invalid_argument);
  AccumulateOptions bad;
  bad.z0 = cplx(0.0, -2.0);
  CHECK_THROWS_AS(accumulate_extended(s, 10, 1e-9, bad), std::invalid_argument);
  AccumulateOptions tiny;
  tiny.tail_quotients = 1;
  CHECK_THROWS_AS(accumulate_extended(s, 10, 1e-9, tiny), std::invalid_argument);
}

TEST_CASE("denominator growth estimates") {
  WordStream s = WordStream::periodic(EvenWord(), EvenWord::parse("1,1"));
  std::vector<DenominatorEstimate> rows = epsilon_hat_denominators(s, 50);
  REQUIRE(rows.size() == 50);
  // c_n are Fibonacci numbers F(2n): 1, 3, 8, 21, ...
  CHECK(rows[0].log_c == doctest::Approx(std::log(1.0)));
  CHECK(rows[1].log_c == doctest::Approx(std::log(3.0)));
  CHECK(rows[2].log_c == doctest::Approx(std::log(8.0)));
  CHECK(rows[3].log_c == doctest::Approx(std::log(21.0)));
  const double phi2 = 2.618033988749895;
  CHECK(rows.back().estimate == doctest::Approx(phi2).epsilon(1e-12));
  // The plain n-th root still carries the O(1/n) bias from the sqrt(5) factor.
  CHECK(rows.back().root == doctest::Approx(phi2 * std::pow(5.0, -0.01)).epsilon(1e-4));
  CHECK(rows.back().n == 50);

  // Joint consistency with the eta-based growth: 2 log(estimate) ~ one_hat.
  ConvergenceReport r = accumulate_extended(s, 50, 1e-9);
  CHECK(std::abs(2.0 * std::log(rows.back().estimate) - r.one_hat.real()) < 1e-6);

  CHECK_THROWS_AS(epsilon_hat_denominators(s, 0), std::invalid_argument);
}

TEST_CASE("denominator estimates without declared period fall back to the root") {
  auto gen = [](std::size_t) { return EvenWord::parse("1,1"); };
  WordStream s = WordStream::custom(gen, 2, true);
  std::vector<DenominatorEstimate> rows = epsilon_hat_denominators(s, 40);
  CHECK(rows.back().estimate == rows.back().root);
  CHECK(rows.back().root > 2.5);
  CHECK(rows.back().root < 2.618033988749895);
}

TEST_CASE("scheme reference values") {
  // Single component, no prefix: the reference is just the cycle value of W.
  StreamComponent lone{EvenWord(), EvenWord::parse("1,1"), Schedule::linear};
  SchemeReference ref = theorem1_reference({lone});
  CycleValues cyc = cycle_integrals(EvenWord::parse("1,1"), 1e-10);
  CHECK(std::abs(ref.val_hat - cyc.val_hat) < 1e-9 * std::abs(cyc.val_hat));
  CHECK(ref.one_hat == doctest::Approx(cyc.one_hat).epsilon(1e-12));
  CHECK(std::abs(ref.val - cyc.val) < 1e-9 * std::abs(cyc.val));
  CHECK(ref.weights == std::vector<double>{1.0});

  // A prefix word changes nothing: it has weight zero in the limit.
  StreamComponent with_prefix{EvenWord::parse("3,1"), EvenWord::parse("1,1"), Schedule::linear};
  SchemeReference ref2 = theorem1_reference({with_prefix});
  CHECK(std::abs(ref2.val_hat - ref.val_hat) < 1e-12 * std::abs(ref.val_hat));

  // Two components on the same growth class: pair-count weighted mean.
  StreamComponent c1{EvenWord(), EvenWord::parse("1,1"), Schedule::linear};
  StreamComponent c2{EvenWord(), EvenWord::parse("2,2,1,1"), Schedule::linear};
  SchemeReference mixed = theorem1_reference({c1, c2});
  CycleValues v1 = cycle_integrals(EvenWord::parse("1,1"), 1e-10);
  CycleValues v2 = cycle_integrals(EvenWord::parse("2,2,1,1"), 1e-10);
  cplx want_val = (0.5 * 1.0 * v1.val_hat + 0.5 * 2.0 * v2.val_hat) / (0.5 * 1.0 + 0.5 * 2.0);
  double want_one = (0.5 * 1.0 * v1.one_hat + 0.5 * 2.0 * v2.one_hat) / (0.5 * 1.0 + 0.5 * 2.0);
  CHECK(std::abs(mixed.val_hat - want_val) < 1e-9 * std::abs(want_val));
  CHECK(mixed.one_hat == doctest::Approx(want_one).epsilon(1e-12));

  // A slow component is dropped from the limit entirely.
  StreamComponent slow{EvenWord(), EvenWord::parse("9,9"), Schedule::log2_floor};
  SchemeReference dom = theorem1_reference({c1, slow});
  CHECK(std::abs(dom.val_hat - v1.val_hat) < 1e-9 * std::abs(v1.val_hat));

  CHECK_THROWS_AS(theorem1_reference({}), std::invalid_argument);
}

TEST_CASE("scheme streams drift toward the reference values") {
  // Two growing blocks: x = [W1 W2 W1^2 W2^2 ...]. Single-pair steps keep the
  // pulled-back endpoints well off the axis even when the generations get
  // long; generation g ends after g(g+1) pairs.
  StreamComponent c1{EvenWord(), EvenWord::parse("1,1"), Schedule::linear};
  StreamComponent c2{EvenWord(), EvenWord::parse("2,2"), Schedule::linear};
  WordStream s = WordStream::concatenation_scheme({c1, c2});
  SchemeReference ref = theorem1_reference({c1, c2});

  ConvergenceReport r = accumulate_extended(s, 12 * 13, 1e-8);
  // Junction corrections are O(1) per generation, so the boundary averages
  // approach the reference like 1/g.
  double d_early = std::abs(r.rows[6 * 7 - 1].val_hat - ref.val_hat);
  double d_late = std::abs(r.rows[12 * 13 - 1].val_hat - ref.val_hat);
  CHECK(d_late < d_early);
  CHECK(d_late < 0.1 * std::abs(ref.val_hat));
  CHECK(std::abs(r.rows[12 * 13 - 1].one_hat.real() - ref.one_hat) < 0.1 * ref.one_hat);

  // The normalizer counts prefix pairs too: A_n = k'*n + sum of schedules.
  StreamComponent pref{EvenWord::parse("3,1"), EvenWord::parse("1,1"), Schedule::linear};
  WordStream t = WordStream::concatenation_scheme({pref});
  CHECK(scheme_normalizer({pref}, 28) == BigInt(t.pairs_through_word(28)));
}

TEST_CASE("morphism word estimates stay bounded and start at the seed cycle") {
  EvenWord V = EvenWord::parse("1,1");
  EvenWord W = EvenWord::parse("2,2");
  std::vector<MorphismEstimate> rows = thue_morse_estimates(V, W, 3, 1e-9);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].n == 0);
  CHECK(rows[0].word_pairs == 1);
  CycleValues v0 = cycle_integrals(V, 1e-9);
  CHECK(std::abs(rows[0].val_hat - v0.val_hat) < 1e-7 * std::abs(v0.val_hat));
  CHECK(rows[0].one_hat == doctest::Approx(v0.one_hat).epsilon(1e-12));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].word_pairs == (std::size_t{1} << (2 * i)));
    CHECK(rows[i].one_hat > 1.9);   // between the two seed growth rates
    CHECK(rows[i].one_hat < 3.53);
    CHECK(std::abs(rows[i].val_hat) > 100.0);
    CHECK(std::abs(rows[i].val_hat) < 5000.0);
  }
  // Successive gaps of one_hat shrink as the words converge in frequency.
  double g1 = std::abs(rows[1].one_hat - rows[0].one_hat);
  double g2 = std::abs(rows[2].one_hat - rows[1].one_hat);
  double g3 = std::abs(rows[3].one_hat - rows[2].one_hat);
  CHECK(g2 < g1);
  CHECK(g3 < g2);

  CHECK_THROWS_AS(thue_morse_estimates(V, W, 6, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(thue_morse_estimates(EvenWord(), W, 2, 1e-9), std::invalid_argument);
}

TEST_CASE("levy statistic matches the expected constant and is deterministic") {
  LevyResult a = levy_monte_carlo(40, 300, 2048, 7);
  LevyResult b = levy_monte_carlo(40, 300, 2048, 7, 4);
  REQUIRE(a.statistics.size() == 40);
  REQUIRE(b.statistics.size() == 40);
  for (std::size_t i = 0; i < a.statistics.size(); ++i) CHECK(a.statistics[i] == b.statistics[i]);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_of_mean == b.stderr_of_mean);

  const double levy = 2.3731382208312509;
  CHECK(std::abs(a.mean - levy) < 0.05);
  CHECK(a.stderr_of_mean > 0.0);
  CHECK(a.stderr_of_mean < 0.05);

  LevyResult c = levy_monte_carlo(40, 300, 2048, 8);
  CHECK(c.mean != a.mean);  // different seed, different sample

  CHECK_THROWS_AS(levy_monte_carlo(0, 300, 2048, 1), std::invalid_argument);
  CHECK_THROWS_AS(levy_monte_carlo(10, 0, 2048, 1), std::invalid_argument);
  CHECK_THROWS_AS(levy_monte_carlo(10, 300, 32, 1), std::invalid_argument);
  // depth too deep for the bit budget: quotients would exhaust the rational.
  CHECK_THROWS_AS(levy_monte_carlo(10, 1000, 2048, 1), std::invalid_argument);
}

TEST_CASE("repetition residuals stay bounded while the integrals grow linearly") {
  EvenWord V = EvenWord::parse("1,1");
  std::vector<std::size_t> a_seq{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<cplx> res = repetition_residuals(V, a_seq, 1e-8);
  REQUIRE(res.size() == a_seq.size());
  // Residuals are bounded: the late spread is no larger than the early one.
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 4; i < res.size(); ++i) {
    lo = std::min(lo, res[i].real());
    hi = std::max(hi, res[i].real());
  }
  CycleValues cyc = cycle_integrals(V, 1e-9);
  // a * pairs * val_hat at a=8 is ~8 * 1360; residuals must be far smaller.
  CHECK(hi - lo < 0.05 * 8.0 * std::abs(cyc.val_hat));
  for (const cplx& r : res) CHECK(std::abs(r) < 2.0 * std::abs(cyc.val_hat));

  CHECK_THROWS_AS(repetition_residuals(EvenWord(), a_seq, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(repetition_residuals(V, {}, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(repetition_residuals(V, {0}, 1e-8), std::invalid_argument);
}

TEST_CASE("repetition residuals trivial schedules") {
  EvenWord V = EvenWord::parse("1,1");
  // A constant schedule is a constant residual: the computation is a pure
  // function of (V, a).
  std::vector<cplx> con = repetition_residuals(V, {3, 3, 3}, 1e-8);
  CHECK(con[0] == con[1]);
  CHECK(con[1] == con[2]);

  // Doubling the word doubles the linear slope; with the doubled subtrahend
  // the residuals stay bounded by the same kind of constant.
  std::vector<cplx> sq = repetition_residuals(V.pow(2), {1, 2, 3, 4}, 1e-8);
  CycleValues cyc = cycle_integrals(V, 1e-9);
  for (const cplx& r : sq) CHECK(std::abs(r) < 4.0 * std::abs(cyc.val_hat));
  // val_hat itself is power-invariant, so the subtracted slopes differ by
  // exactly the pair-count factor 2.
  CycleValues cyc2 = cycle_integrals(V.pow(2), 1e-9);
  CHECK(std::abs(cyc2.val_hat - cyc.val_hat) < 1e-7 * std::abs(cyc.val_hat));
}

TEST_CASE("verdict names") {
  CHECK(verdict_name(Verdict::converged) == "converged");
  CHECK(verdict_name(Verdict::bounded_oscillation) == "bounded-oscillation");
  CHECK(verdict_name(Verdict::undetermined) == "undetermined");
}
