#pragma once

#include "cyclint/bigint.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cyclint {

// Even-length tuple of positive continued-fraction quotients.
class EvenWord {
 public:
  EvenWord() = default;
  explicit EvenWord(std::vector<int> entries);

  // Comma-separated literal, e.g. "2,1,2,1". Rejections name the bad token.
  static EvenWord parse(std::string_view literal);

  const std::vector<int>& entries() const { return k_; }
  std::size_t size() const { return k_.size(); }
  std::size_t pairs() const { return k_.size() / 2; }
  bool empty() const { return k_.empty(); }
  int max_entry() const;

  EvenWord reversed() const;
  EvenWord pow(std::size_t n) const;
  EvenWord rotated_pairs(std::size_t m) const;  // cyclic shift by m pairs
  EvenWord pair_at(std::size_t m) const;        // 1-based, the m-th length-2 chunk
  std::string str() const;

  bool operator==(const EvenWord& o) const { return k_ == o.k_; }

 private:
  std::vector<int> k_;
};

EvenWord concat(const EvenWord& a, const EvenWord& b);

// Integer 2x2 matrix with determinant +-1.
struct UnimodularMatrix {
  BigInt a{1}, b{0}, c{0}, d{1};

  UnimodularMatrix() = default;
  UnimodularMatrix(BigInt a_, BigInt b_, BigInt c_, BigInt d_);

  BigInt det() const { return a * d - b * c; }
  UnimodularMatrix inverse() const;  // exact, uses det = +-1
  bool identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
    return UnimodularMatrix(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
  }
  bool operator==(const UnimodularMatrix& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

// Product of (k 1; 1 0) factors over the word's entries.
UnimodularMatrix word_matrix(const EvenWord& w);

// Largest n with w = u^n for an even word u.
std::size_t primitive_exponent(const EvenWord& w);
EvenWord primitive_root(const EvenWord& w);

// -------- block morphism on the two-letter alphabet {V, W} --------
//
// h maps V -> VW and W -> WV; tau swaps the letters. Blocks are stored as
// 0 = V, 1 = W.

std::vector<int> thue_morse_blocks(int n);  // block sequence of h^n(V), length 2^n
EvenWord thue_morse_prefix(const EvenWord& V, const EvenWord& W, int n);

struct MorphismChecks {
  bool doubling = false;               // h^n(V) == h^(n-1)(V) . h^(n-1)(W), with
                                       // h^(n-1)(W) the letter-swapped image
  std::optional<bool> block_palindrome;  // block reversal fixes h^n(V); even n only
  bool cubefree = false;               // no XXX factor in the block sequence
};
MorphismChecks thue_morse_identities(const EvenWord& V, const EvenWord& W, int n);

// -------- word streams --------

enum class Schedule { linear, sqrt_ceil, log2_floor };

std::size_t schedule_value(Schedule s, std::size_t n);
Schedule parse_schedule(std::string_view token);

struct StreamComponent {
  EvenWord V;  // may be empty
  EvenWord W;  // non-empty
  Schedule sched = Schedule::linear;
};

// Infinite (or finite) sequence of even words with a bounded alphabet.
// Copies share one lazily filled entry cache; reads are thread-safe.
class WordStream {
 public:
  static WordStream periodic(const EvenWord& preperiod, const EvenWord& period);
  static WordStream from_words(std::vector<EvenWord> words);  // finite
  static WordStream concatenation_scheme(std::vector<StreamComponent> components);
  static WordStream custom(std::function<EvenWord(std::size_t)> gen, int alphabet_bound,
                           bool caller_asserts_badly_approximable);

  EvenWord word(std::size_t n) const;  // 1-based generation index
  bool finite() const;
  std::size_t word_count() const;  // meaningful for finite streams only

  int entry(std::size_t i) const;        // 0-based flattened quotient sequence
  EvenWord pair(std::size_t m) const;    // 1-based length-2 chunk view
  std::size_t pairs_through_word(std::size_t n) const;

  // Value of [k_{i+1}, k_{i+2}, ...] truncated to `quotients` terms,
  // evaluated by the backward recurrence. Error below 2^(1-quotients).
  double tail_value(std::size_t from_entry, std::size_t quotients = 60) const;

  int alphabet_bound() const;
  bool has_declared_period() const;
  std::size_t period_pairs() const;
  std::size_t preperiod_pairs() const;
  const std::vector<StreamComponent>* components() const;

  WordStream drop_words(std::size_t count) const;

 private:
  struct State;
  std::shared_ptr<State> st_;
  WordStream() = default;
};

// Limiting occupation weights of the scheme's repeated blocks: schedules of the
// fastest growth class split the mass equally, the rest get zero.
std::vector<double> scheme_weights(const std::vector<StreamComponent>& components);

// A_n = k'*n + sum_i sum_{j<=n} a_{i,j}, with k' the number of non-empty V_i.
BigInt scheme_normalizer(const std::vector<StreamComponent>& components, std::size_t n);

}  // namespace cyclint
