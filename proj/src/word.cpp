#include "cyclint/word.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <mutex>
#include <sstream>

namespace cyclint {

namespace {

constexpr int kMaxEntry = 1'000'000;
constexpr std::size_t kMaxBlockExponent = 22;

int parse_entry(std::string_view token) {
  std::size_t b = token.find_first_not_of(" \t");
  std::size_t e = token.find_last_not_of(" \t");
  if (b == std::string_view::npos)
    throw std::invalid_argument("word entry is empty");
  token = token.substr(b, e - b + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw std::invalid_argument("word entry is not an integer: '" + std::string(token) + "'");
  if (value < 1)
    throw std::invalid_argument("word entry must be positive: '" + std::string(token) + "'");
  if (value > kMaxEntry)
    throw std::invalid_argument("word entry too large: '" + std::string(token) + "'");
  return value;
}

}  // namespace

EvenWord::EvenWord(std::vector<int> entries) : k_(std::move(entries)) {
  if (k_.size() % 2 != 0) throw std::invalid_argument("word length must be even");
  for (int k : k_) {
    if (k < 1) throw std::invalid_argument("word entry must be positive: '" + std::to_string(k) + "'");
    if (k > kMaxEntry) throw std::invalid_argument("word entry too large: '" + std::to_string(k) + "'");
  }
}

EvenWord EvenWord::parse(std::string_view literal) {
  std::vector<int> ks;
  if (literal.find_first_not_of(" \t") == std::string_view::npos) return EvenWord(std::move(ks));
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = literal.find(',', pos);
    std::string_view token = literal.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
    ks.push_back(parse_entry(token));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return EvenWord(std::move(ks));
}

int EvenWord::max_entry() const {
  int m = 1;
  for (int k : k_) m = std::max(m, k);
  return m;
}

EvenWord EvenWord::reversed() const {
  std::vector<int> r(k_.rbegin(), k_.rend());
  return EvenWord(std::move(r));
}

EvenWord EvenWord::pow(std::size_t n) const {
  std::vector<int> r;
  r.reserve(k_.size() * n);
  for (std::size_t i = 0; i < n; ++i) r.insert(r.end(), k_.begin(), k_.end());
  return EvenWord(std::move(r));
}

EvenWord EvenWord::rotated_pairs(std::size_t m) const {
  if (empty()) return *this;
  const std::size_t shift = (m % pairs()) * 2;
  std::vector<int> r(k_.begin() + shift, k_.end());
  r.insert(r.end(), k_.begin(), k_.begin() + shift);
  return EvenWord(std::move(r));
}

EvenWord EvenWord::pair_at(std::size_t m) const {
  if (m < 1 || m > pairs()) throw std::out_of_range("pair index out of range");
  return EvenWord({k_[2 * (m - 1)], k_[2 * (m - 1) + 1]});
}

std::string EvenWord::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (i) os << ',';
    os << k_[i];
  }
  return os.str();
}

EvenWord concat(const EvenWord& a, const EvenWord& b) {
  std::vector<int> r = a.entries();
  r.insert(r.end(), b.entries().begin(), b.entries().end());
  return EvenWord(std::move(r));
}

UnimodularMatrix::UnimodularMatrix(BigInt a_, BigInt b_, BigInt c_, BigInt d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  const BigInt dt = det();
  if (dt != 1 && dt != -1) throw std::invalid_argument("matrix determinant must be +-1");
}

UnimodularMatrix UnimodularMatrix::inverse() const {
  const BigInt s = det();  // +-1, and 1/det == det
  return UnimodularMatrix(d * s, -b * s, -c * s, a * s);
}

UnimodularMatrix word_matrix(const EvenWord& w) {
  UnimodularMatrix m;
  for (int k : w.entries()) {
    // m *= (k 1; 1 0)
    const BigInt na = m.a * k + m.b;
    const BigInt nc = m.c * k + m.d;
    m.b = m.a;
    m.d = m.c;
    m.a = na;
    m.c = nc;
  }
  return m;
}

std::size_t primitive_exponent(const EvenWord& w) {
  if (w.empty()) throw std::invalid_argument("primitive_exponent: empty word");
  const auto& k = w.entries();
  const std::size_t len = k.size();
  for (std::size_t p = 2; p <= len; p += 2) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < len && periodic; ++i) periodic = (k[i] == k[i - p]);
    if (periodic) return len / p;
  }
  return 1;
}

EvenWord primitive_root(const EvenWord& w) {
  const std::size_t n = primitive_exponent(w);
  std::vector<int> r(w.entries().begin(), w.entries().begin() + w.size() / n);
  return EvenWord(std::move(r));
}

std::vector<int> thue_morse_blocks(int n) {
  if (n < 0 || static_cast<std::size_t>(n) > kMaxBlockExponent)
    throw std::invalid_argument("block exponent out of range");
  std::vector<int> b(std::size_t{1} << n);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::popcount(i) & 1;
  return b;
}

EvenWord thue_morse_prefix(const EvenWord& V, const EvenWord& W, int n) {
  if (V.empty() || W.empty()) throw std::invalid_argument("morphism letters must be non-empty");
  const std::vector<int> blocks = thue_morse_blocks(n);
  std::vector<int> r;
  r.reserve(blocks.size() * std::max(V.size(), W.size()));
  for (int b : blocks) {
    const auto& src = (b == 0 ? V : W).entries();
    r.insert(r.end(), src.begin(), src.end());
  }
  return EvenWord(std::move(r));
}

namespace {

bool is_cubefree(const std::vector<int>& b) {
  const std::size_t n = b.size();
  for (std::size_t len = 1; 3 * len <= n; ++len)
    for (std::size_t i = 0; i + 3 * len <= n; ++i) {
      bool cube = true;
      for (std::size_t j = 0; j < 2 * len && cube; ++j) cube = (b[i + j] == b[i + j + len]);
      if (cube) return false;
    }
  return true;
}

}  // namespace

MorphismChecks thue_morse_identities(const EvenWord& V, const EvenWord& W, int n) {
  if (n < 1) throw std::invalid_argument("morphism identity check needs n >= 1");
  MorphismChecks out;
  const std::vector<int> cur = thue_morse_blocks(n);
  const std::vector<int> prev = thue_morse_blocks(n - 1);

  // h^n(V) = h^(n-1)(V) . h^(n-1)(W), and h^(n-1)(W) is the letter swap of
  // h^(n-1)(V); verified on blocks and again on the instantiated entry word.
  std::vector<int> glued = prev;
  for (int x : prev) glued.push_back(1 - x);
  bool ok = (glued == cur);
  if (ok) {
    const EvenWord lhs = thue_morse_prefix(V, W, n);
    EvenWord rhs = thue_morse_prefix(V, W, n - 1);
    for (int x : prev) rhs = concat(rhs, x == 0 ? W : V);
    ok = (lhs == rhs);
  }
  out.doubling = ok;

  if (n % 2 == 0) {
    std::vector<int> rev(cur.rbegin(), cur.rend());
    out.block_palindrome = (rev == cur);
  }
  out.cubefree = is_cubefree(cur);
  return out;
}

std::size_t schedule_value(Schedule s, std::size_t n) {
  if (n < 1) throw std::invalid_argument("schedule index must be >= 1");
  switch (s) {
    case Schedule::linear:
      return n;
    case Schedule::sqrt_ceil: {
      std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
      while (r * r > n) --r;
      while (r * r < n) ++r;
      return r;
    }
    case Schedule::log2_floor:
      return static_cast<std::size_t>(std::bit_width(n));
  }
  throw std::logic_error("unknown schedule");
}

Schedule parse_schedule(std::string_view token) {
  if (token == "n" || token == "linear") return Schedule::linear;
  if (token == "sqrt") return Schedule::sqrt_ceil;
  if (token == "log") return Schedule::log2_floor;
  throw std::invalid_argument("unknown schedule: '" + std::string(token) + "' (expected n, sqrt, or log)");
}

struct WordStream::State {
  std::function<EvenWord(std::size_t)> gen;
  std::size_t count = static_cast<std::size_t>(-1);
  int alphabet_bound = 20;
  bool declared_periodic = false;
  std::size_t period_pairs_ = 0;
  std::size_t preperiod_pairs_ = 0;
  std::vector<StreamComponent> components;

  mutable std::mutex mu;
  mutable std::vector<int> entries;
  mutable std::vector<std::size_t> word_end;  // cumulative entries after word n

  // Requires mu held. Materializes words until `need` entries (or `words` words) exist.
  void fill(std::size_t need_entries, std::size_t need_words) const {
    while (entries.size() < need_entries || word_end.size() < need_words) {
      const std::size_t n = word_end.size() + 1;
      if (n > count) throw std::runtime_error("stream exhausted at word " + std::to_string(n));
      const EvenWord w = gen(n);
      if (w.empty()) throw std::runtime_error("stream produced an empty word");
      for (int k : w.entries()) {
        if (k > alphabet_bound)
          throw std::invalid_argument("stream entry " + std::to_string(k) +
                                      " exceeds declared alphabet bound " +
                                      std::to_string(alphabet_bound));
        entries.push_back(k);
      }
      word_end.push_back(entries.size());
    }
  }
};

WordStream WordStream::periodic(const EvenWord& preperiod, const EvenWord& period) {
  if (period.empty()) throw std::invalid_argument("period word must be non-empty");
  WordStream s;
  s.st_ = std::make_shared<State>();
  auto st = s.st_;
  const bool has_pre = !preperiod.empty();
  st->gen = [preperiod, period, has_pre](std::size_t n) {
    if (has_pre && n == 1) return preperiod;
    return period;
  };
  st->alphabet_bound = std::max(preperiod.empty() ? 1 : preperiod.max_entry(), period.max_entry());
  st->declared_periodic = true;
  st->period_pairs_ = period.pairs();
  st->preperiod_pairs_ = preperiod.pairs();
  return s;
}

WordStream WordStream::from_words(std::vector<EvenWord> words) {
  if (words.empty()) throw std::invalid_argument("stream needs at least one word");
  WordStream s;
  s.st_ = std::make_shared<State>();
  auto st = s.st_;
  int bound = 1;
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("stream words must be non-empty");
    bound = std::max(bound, w.max_entry());
  }
  st->count = words.size();
  auto shared = std::make_shared<std::vector<EvenWord>>(std::move(words));
  st->gen = [shared](std::size_t n) { return (*shared)[n - 1]; };
  st->alphabet_bound = bound;
  return s;
}

WordStream WordStream::concatenation_scheme(std::vector<StreamComponent> components) {
  if (components.empty()) throw std::invalid_argument("scheme needs at least one component");
  int bound = 1;
  for (const auto& c : components) {
    if (c.W.empty()) throw std::invalid_argument("scheme repeated blocks must be non-empty");
    bound = std::max({bound, c.W.max_entry(), c.V.empty() ? 1 : c.V.max_entry()});
  }
  WordStream s;
  s.st_ = std::make_shared<State>();
  auto st = s.st_;
  auto comps = std::make_shared<std::vector<StreamComponent>>(components);
  st->gen = [comps](std::size_t n) {
    EvenWord u;
    for (const auto& c : *comps) {
      if (!c.V.empty()) u = concat(u, c.V);
      u = concat(u, c.W.pow(schedule_value(c.sched, n)));
    }
    return u;
  };
  st->alphabet_bound = bound;
  st->components = std::move(components);
  return s;
}

WordStream WordStream::custom(std::function<EvenWord(std::size_t)> gen, int alphabet_bound,
                              bool caller_asserts_badly_approximable) {
  if (!gen) throw std::invalid_argument("stream generator must be callable");
  if (alphabet_bound < 1) throw std::invalid_argument("alphabet bound must be positive");
  if (!caller_asserts_badly_approximable)
    throw std::invalid_argument("custom streams require the bounded-quotient assertion");
  WordStream s;
  s.st_ = std::make_shared<State>();
  s.st_->gen = std::move(gen);
  s.st_->alphabet_bound = alphabet_bound;
  return s;
}

EvenWord WordStream::word(std::size_t n) const {
  if (n < 1) throw std::invalid_argument("word index must be >= 1");
  if (n > st_->count) throw std::runtime_error("stream exhausted at word " + std::to_string(n));
  return st_->gen(n);
}

bool WordStream::finite() const { return st_->count != static_cast<std::size_t>(-1); }

std::size_t WordStream::word_count() const { return st_->count; }

int WordStream::entry(std::size_t i) const {
  std::lock_guard<std::mutex> lock(st_->mu);
  st_->fill(i + 1, 0);
  return st_->entries[i];
}

EvenWord WordStream::pair(std::size_t m) const {
  if (m < 1) throw std::invalid_argument("pair index must be >= 1");
  std::lock_guard<std::mutex> lock(st_->mu);
  st_->fill(2 * m, 0);
  return EvenWord({st_->entries[2 * m - 2], st_->entries[2 * m - 1]});
}

std::size_t WordStream::pairs_through_word(std::size_t n) const {
  std::lock_guard<std::mutex> lock(st_->mu);
  st_->fill(0, n);
  return st_->word_end[n - 1] / 2;
}

double WordStream::tail_value(std::size_t from_entry, std::size_t quotients) const {
  if (quotients < 2) throw std::invalid_argument("tail needs at least two quotients");
  std::lock_guard<std::mutex> lock(st_->mu);
  std::size_t last = from_entry + quotients;  // exclusive
  try {
    st_->fill(last, 0);
  } catch (const std::runtime_error&) {
    last = st_->entries.size();  // finite stream: use what exists
    if (last < from_entry + 2) throw;
  }
  double v = static_cast<double>(st_->entries[last - 1]);
  for (std::size_t i = last - 1; i > from_entry; --i)
    v = static_cast<double>(st_->entries[i - 1]) + 1.0 / v;
  return v;
}

int WordStream::alphabet_bound() const { return st_->alphabet_bound; }
bool WordStream::has_declared_period() const { return st_->declared_periodic; }
std::size_t WordStream::period_pairs() const { return st_->period_pairs_; }
std::size_t WordStream::preperiod_pairs() const { return st_->preperiod_pairs_; }

const std::vector<StreamComponent>* WordStream::components() const {
  return st_->components.empty() ? nullptr : &st_->components;
}

WordStream WordStream::drop_words(std::size_t count) const {
  WordStream s;
  s.st_ = std::make_shared<State>();
  auto base = st_;
  s.st_->gen = [base, count](std::size_t n) { return base->gen(n + count); };
  if (finite()) {
    if (count >= st_->count) throw std::invalid_argument("cannot drop every stream word");
    s.st_->count = st_->count - count;
  }
  s.st_->alphabet_bound = st_->alphabet_bound;
  if (st_->declared_periodic) {
    s.st_->declared_periodic = true;
    s.st_->period_pairs_ = st_->period_pairs_;
    s.st_->preperiod_pairs_ = 0;
  }
  return s;
}

std::vector<double> scheme_weights(const std::vector<StreamComponent>& components) {
  auto rank = [](Schedule s) {
    switch (s) {
      case Schedule::linear: return 3;
      case Schedule::sqrt_ceil: return 2;
      case Schedule::log2_floor: return 1;
    }
    return 0;
  };
  int top = 0;
  for (const auto& c : components) top = std::max(top, rank(c.sched));
  std::size_t dom = 0;
  for (const auto& c : components)
    if (rank(c.sched) == top) ++dom;
  std::vector<double> w;
  w.reserve(components.size());
  for (const auto& c : components) w.push_back(rank(c.sched) == top ? 1.0 / static_cast<double>(dom) : 0.0);
  return w;
}

BigInt scheme_normalizer(const std::vector<StreamComponent>& components, std::size_t n) {
  BigInt a = 0;
  std::size_t kprime = 0;
  for (const auto& c : components) {
    if (!c.V.empty()) ++kprime;
    for (std::size_t j = 1; j <= n; ++j) a += static_cast<unsigned long long>(schedule_value(c.sched, j));
  }
  return a + BigInt(kprime) * n;
}

}  // namespace cyclint
