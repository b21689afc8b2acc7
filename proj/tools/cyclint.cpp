#include "cyclint/contour.hpp"
#include "cyclint/extended.hpp"
#include "cyclint/modular_j.hpp"
#include "cyclint/surd.hpp"
#include "cyclint/word.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::ordered_json;
using namespace cyclint;

namespace {

// All floating output passes through here: 15 significant digits, C locale.
double round15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
}

std::complex<double> parse_point(const std::string& s) {
  const std::size_t comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("point must be given as \"x,y\": '" + s + "'");
  std::size_t used = 0;
  double re = 0.0, im = 0.0;
  try {
    re = std::stod(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(s);
    const std::string rest = s.substr(comma + 1);
    im = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("point must be given as \"x,y\": '" + s + "'");
  }
  return {re, im};
}

EvenWord parse_word_or_empty(const std::string& s) {
  if (s.empty()) return EvenWord();
  return EvenWord::parse(s);
}

std::vector<StreamComponent> parse_scheme(const std::string& spec) {
  std::vector<StreamComponent> components;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t end = std::min(spec.find(';', pos), spec.size());
    const std::string part = spec.substr(pos, end - pos);
    const std::size_t b1 = part.find('|');
    const std::size_t b2 = b1 == std::string::npos ? std::string::npos : part.find('|', b1 + 1);
    if (b1 == std::string::npos || b2 == std::string::npos)
      throw std::invalid_argument("scheme component must be \"V|W|schedule\": '" + part + "'");
    StreamComponent c;
    c.V = parse_word_or_empty(part.substr(0, b1));
    c.W = EvenWord::parse(part.substr(b1 + 1, b2 - b1 - 1));
    c.sched = parse_schedule(part.substr(b2 + 1));
    components.push_back(std::move(c));
    if (end == spec.size()) break;
    pos = end + 1;
  }
  if (components.empty()) throw std::invalid_argument("scheme must have at least one component");
  return components;
}

unsigned resolve_threads(int flag_value) {
  if (flag_value >= 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("CYCLINT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("CYCLINT_THREADS must be a non-negative integer");
  }
  return 1;
}

std::string run_quadratic(const std::string& word, double tol, const std::string& format) {
  const EvenWord w = EvenWord::parse(word);
  const CycleValues cv = cycle_integrals(w, tol);
  const QuadraticUnit unit = epsilon_hat_quadratic(w);
  if (format == "csv") {
    std::string out =
        "val_tilde_re,val_tilde_im,one_tilde,val_re,val_im,val_hat_re,val_hat_im,one_hat,eps_hat,"
        "im_diagnostic\n";
    out += fmt15(cv.val_tilde.real()) + "," + fmt15(cv.val_tilde.imag()) + "," +
           fmt15(cv.one_tilde) + "," + fmt15(cv.val.real()) + "," + fmt15(cv.val.imag()) + "," +
           fmt15(cv.val_hat.real()) + "," + fmt15(cv.val_hat.imag()) + "," + fmt15(cv.one_hat) +
           "," + fmt15(cv.eps_hat) + "," + fmt15(cv.im_diagnostic) + "\n";
    return out;
  }
  ordered_json j;
  j["input"] = w.str();
  j["val_tilde_re"] = round15(cv.val_tilde.real());
  j["val_tilde_im"] = round15(cv.val_tilde.imag());
  j["one_tilde"] = round15(cv.one_tilde);
  j["val_re"] = round15(cv.val.real());
  j["val_im"] = round15(cv.val.imag());
  j["val_hat_re"] = round15(cv.val_hat.real());
  j["val_hat_im"] = round15(cv.val_hat.imag());
  j["one_hat"] = round15(cv.one_hat);
  j["eps_hat"] = round15(cv.eps_hat);
  j["im_diagnostic"] = round15(cv.im_diagnostic);
  j["unit"] = unit.unit.str();
  j["unit_exponent"] = unit.exponent;
  return j.dump(2) + "\n";
}

std::string report_json(const std::string& input, const ConvergenceReport& rep) {
  ordered_json j;
  j["input"] = input;
  j["n"] = rep.rows.size();
  ordered_json rows = ordered_json::array();
  for (const PartialRow& r : rep.rows) {
    ordered_json row;
    row["n"] = r.n;
    row["sum_len"] = r.sum_len;
    row["val_hat_re"] = round15(r.val_hat.real());
    row["val_hat_im"] = round15(r.val_hat.imag());
    row["one_hat_re"] = round15(r.one_hat.real());
    row["one_hat_im"] = round15(r.one_hat.imag());
    row["eps_hat"] = round15(r.eps_hat);
    rows.push_back(std::move(row));
  }
  j["partial"] = std::move(rows);
  j["verdict"] = verdict_name(rep.verdict);
  if (rep.val) {
    j["val_re"] = round15(rep.val->real());
    j["val_im"] = round15(rep.val->imag());
  } else {
    j["val_re"] = nullptr;
    j["val_im"] = nullptr;
  }
  ordered_json diag;
  diag["max_pullback"] = round15(rep.max_pullback);
  diag["max_im_part"] = round15(rep.max_im_part);
  j["diagnostics"] = std::move(diag);
  return j.dump(2) + "\n";
}

std::string report_csv(const ConvergenceReport& rep) {
  std::string out = "n,sum_len,val_hat_re,val_hat_im,one_hat,eps_hat\n";
  for (const PartialRow& r : rep.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.sum_len) + "," +
           fmt15(r.val_hat.real()) + "," + fmt15(r.val_hat.imag()) + "," +
           fmt15(r.one_hat.real()) + "," + fmt15(r.eps_hat) + "\n";
  }
  return out;
}

std::string report_plot(const ConvergenceReport& rep) {
  std::string out;
  for (const PartialRow& r : rep.rows)
    out += std::to_string(r.n) + " " + fmt15(r.val_hat.real()) + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle integrals of the modular j-function and their extended limits"};
  app.require_subcommand(1);

  std::string word, format = "json", out_path, z0_text = "0,1";
  double tol = 1e-10;
  std::size_t nmax = 200;
  int threads_flag = -1;
  bool plot_data = false;

  CLI::App* quadratic = app.add_subcommand("quadratic", "closed-cycle values of a periodic word");
  quadratic->add_option("--word", word, "even word, e.g. \"2,1,2,1\"")->required();
  quadratic->add_option("--tol", tol, "quadrature tolerance");
  quadratic->add_option("--format", format, "json or csv");
  quadratic->add_option("--out", out_path, "output file (default stdout)");

  std::string preperiod_text, periodic_text, scheme_text;
  CLI::App* stream = app.add_subcommand("stream", "partial extended averages over a word stream");
  stream->add_option("--preperiod", preperiod_text, "even word prefix");
  stream->add_option("--periodic", periodic_text, "repeated even word");
  stream->add_option("--theorem1", scheme_text, "concatenation scheme \"V1|W1|sched;...\"");
  stream->add_option("--nmax", nmax, "number of pair steps");
  stream->add_option("--tol", tol, "per-increment quadrature tolerance");
  stream->add_option("--z0", z0_text, "base point \"x,y\"");
  stream->add_option("--threads", threads_flag, "worker threads (0 = all cores)");
  stream->add_option("--format", format, "json or csv");
  stream->add_flag("--plot-data", plot_data, "two-column n / val_hat_re output");
  stream->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* theorem1 = app.add_subcommand("theorem1", "weighted reference value of a scheme");
  theorem1->add_option("--scheme", scheme_text, "\"V1|W1|sched;...\"")->required();
  theorem1->add_option("--tol", tol, "quadrature tolerance");
  theorem1->add_option("--format", format, "json or csv");
  theorem1->add_option("--out", out_path, "output file (default stdout)");

  std::string v_text, w_text;
  int tm_nmax = 3;
  CLI::App* thue = app.add_subcommand("thue-morse", "hat values along the doubling morphism");
  thue->add_option("--v", v_text, "first block word")->required();
  thue->add_option("--w", w_text, "second block word")->required();
  thue->add_option("--nmax", tm_nmax, "deepest doubling step (word h^(2n))");
  thue->add_option("--tol", tol, "quadrature tolerance");
  thue->add_option("--format", format, "json or csv");
  thue->add_flag("--plot-data", plot_data, "two-column n / one_hat output");
  thue->add_option("--out", out_path, "output file (default stdout)");

  std::size_t trials = 100, depth = 500;
  unsigned bits = 2048;
  std::uint64_t seed = 1;
  CLI::App* levy = app.add_subcommand("levy", "convergent-denominator growth statistics");
  levy->add_option("--trials", trials, "number of sampled rationals");
  levy->add_option("--depth", depth, "half the number of extracted quotients");
  levy->add_option("--bits", bits, "denominator bit size");
  levy->add_option("--seed", seed, "base seed");
  levy->add_option("--threads", threads_flag, "worker threads (0 = all cores)");
  levy->add_option("--format", format, "json or csv");
  levy->add_flag("--plot-data", plot_data, "two-column trial / statistic output");
  levy->add_option("--out", out_path, "output file (default stdout)");

  std::string z_text;
  CLI::App* jeval = app.add_subcommand("j-eval", "modular j at a point of the upper half plane");
  jeval->add_option("--z", z_text, "point \"x,y\"")->required();
  jeval->add_option("--format", format, "json or csv");
  jeval->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (format != "json" && format != "csv")
      throw std::invalid_argument("format must be json or csv");

    if (quadratic->parsed()) {
      emit(run_quadratic(word, tol, format), out_path);
    } else if (stream->parsed()) {
      if (scheme_text.empty() == periodic_text.empty())
        throw std::invalid_argument("give exactly one of --periodic or --theorem1");
      WordStream ws = scheme_text.empty()
                          ? WordStream::periodic(parse_word_or_empty(preperiod_text),
                                                 EvenWord::parse(periodic_text))
                          : WordStream::concatenation_scheme(parse_scheme(scheme_text));
      AccumulateOptions opt;
      opt.z0 = parse_point(z0_text);
      opt.threads = resolve_threads(threads_flag);
      const ConvergenceReport rep = accumulate_extended(ws, nmax, tol, opt);
      const std::string input =
          scheme_text.empty() ? "preperiod=" + preperiod_text + ";periodic=" + periodic_text
                              : scheme_text;
      if (plot_data)
        emit(report_plot(rep), out_path);
      else
        emit(format == "csv" ? report_csv(rep) : report_json(input, rep), out_path);
    } else if (theorem1->parsed()) {
      const std::vector<StreamComponent> components = parse_scheme(scheme_text);
      const SchemeReference ref = theorem1_reference(components, tol);
      if (format == "csv") {
        std::string out = "component,weight\n";
        for (std::size_t i = 0; i < ref.weights.size(); ++i)
          out += std::to_string(i + 1) + "," + fmt15(ref.weights[i]) + "\n";
        out += "val_hat_re," + fmt15(ref.val_hat.real()) + "\n";
        out += "val_hat_im," + fmt15(ref.val_hat.imag()) + "\n";
        out += "one_hat," + fmt15(ref.one_hat) + "\n";
        out += "val_re," + fmt15(ref.val.real()) + "\n";
        out += "val_im," + fmt15(ref.val.imag()) + "\n";
        emit(out, out_path);
      } else {
        ordered_json j;
        j["input"] = scheme_text;
        ordered_json w = ordered_json::array();
        for (double x : ref.weights) w.push_back(round15(x));
        j["weights"] = std::move(w);
        j["val_hat_re"] = round15(ref.val_hat.real());
        j["val_hat_im"] = round15(ref.val_hat.imag());
        j["one_hat"] = round15(ref.one_hat);
        j["val_re"] = round15(ref.val.real());
        j["val_im"] = round15(ref.val.imag());
        emit(j.dump(2) + "\n", out_path);
      }
    } else if (thue->parsed()) {
      const EvenWord V = EvenWord::parse(v_text);
      const EvenWord W = EvenWord::parse(w_text);
      const std::vector<MorphismEstimate> rows = thue_morse_estimates(V, W, tm_nmax, tol);
      if (plot_data) {
        std::string out;
        for (const MorphismEstimate& r : rows)
          out += std::to_string(r.n) + " " + fmt15(r.one_hat) + "\n";
        emit(out, out_path);
      } else if (format == "csv") {
        std::string out = "n,word_pairs,val_hat_re,val_hat_im,one_hat,val_re,val_im\n";
        for (const MorphismEstimate& r : rows)
          out += std::to_string(r.n) + "," + std::to_string(r.word_pairs) + "," +
                 fmt15(r.val_hat.real()) + "," + fmt15(r.val_hat.imag()) + "," +
                 fmt15(r.one_hat) + "," + fmt15(r.val.real()) + "," + fmt15(r.val.imag()) + "\n";
        emit(out, out_path);
      } else {
        ordered_json j;
        j["v"] = V.str();
        j["w"] = W.str();
        j["nmax"] = tm_nmax;
        ordered_json arr = ordered_json::array();
        for (const MorphismEstimate& r : rows) {
          ordered_json row;
          row["n"] = r.n;
          row["word_pairs"] = r.word_pairs;
          row["val_hat_re"] = round15(r.val_hat.real());
          row["val_hat_im"] = round15(r.val_hat.imag());
          row["one_hat"] = round15(r.one_hat);
          row["val_re"] = round15(r.val.real());
          row["val_im"] = round15(r.val.imag());
          arr.push_back(std::move(row));
        }
        j["rows"] = std::move(arr);
        ordered_json ids = ordered_json::array();
        for (int n = 1; n <= 2 * tm_nmax; ++n) {
          const MorphismChecks c = thue_morse_identities(V, W, n);
          ordered_json id;
          id["n"] = n;
          id["doubling"] = c.doubling;
          if (c.block_palindrome)
            id["block_palindrome"] = *c.block_palindrome;
          else
            id["block_palindrome"] = nullptr;
          id["cubefree"] = c.cubefree;
          ids.push_back(std::move(id));
        }
        j["identities"] = std::move(ids);
        emit(j.dump(2) + "\n", out_path);
      }
    } else if (levy->parsed()) {
      const LevyResult res = levy_monte_carlo(trials, depth, bits, seed,
                                              resolve_threads(threads_flag));
      if (plot_data) {
        std::string out;
        for (std::size_t t = 0; t < res.statistics.size(); ++t)
          out += std::to_string(t + 1) + " " + fmt15(res.statistics[t]) + "\n";
        emit(out, out_path);
      } else if (format == "csv") {
        std::string out = "trial,statistic\n";
        for (std::size_t t = 0; t < res.statistics.size(); ++t)
          out += std::to_string(t + 1) + "," + fmt15(res.statistics[t]) + "\n";
        out += "mean," + fmt15(res.mean) + "\n";
        out += "stderr," + fmt15(res.stderr_of_mean) + "\n";
        emit(out, out_path);
      } else {
        ordered_json j;
        j["trials"] = trials;
        j["depth"] = depth;
        j["bits"] = bits;
        j["seed"] = seed;
        j["mean"] = round15(res.mean);
        j["stderr"] = round15(res.stderr_of_mean);
        ordered_json arr = ordered_json::array();
        for (double sx : res.statistics) arr.push_back(round15(sx));
        j["statistics"] = std::move(arr);
        emit(j.dump(2) + "\n", out_path);
      }
    } else if (jeval->parsed()) {
      const std::complex<double> z = parse_point(z_text);
      const std::complex<double> v = j_eval(z);
      if (format == "csv") {
        emit("j_re,j_im\n" + fmt15(v.real()) + "," + fmt15(v.imag()) + "\n", out_path);
      } else {
        ordered_json j;
        j["z_re"] = round15(z.real());
        j["z_im"] = round15(z.imag());
        j["j_re"] = round15(v.real());
        j["j_im"] = round15(v.imag());
        emit(j.dump(2) + "\n", out_path);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
