// defosc: command-line frontend.
//
// Exit codes: 0 all checks pass, 2 invalid input, 3 checks ran but failed or
// were flagged.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "defosc/classifier.hpp"
#include "defosc/coherent.hpp"
#include "defosc/fibonacci.hpp"
#include "defosc/io.hpp"
#include "defosc/oscillator.hpp"
#include "defosc/registry.hpp"

#ifndef DEFOSC_VERSION
#define DEFOSC_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace defosc;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitFailed = 3;
constexpr int kExactLimit = 64;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string family = "harmonic";
  std::string params = "{}";
  std::string a, b, q, alpha, theta;
  int dim = 64;
  double tol = 0.0;
  std::string format;
  std::string out;
  std::string config;
  int n_max = 64;
  std::vector<std::string> z;
  std::string op = "all";
  int n = 10;
  int shift = -1;
  int K = 200;
  std::string convention = "classical";
};

enum class Precision { Double, Extended };

Precision precision_from_env() {
  const char* env = std::getenv("DEFOSC_PRECISION");
  if (env == nullptr || std::string(env).empty() || std::string(env) == "double") return Precision::Double;
  if (std::string(env) == "extended") return Precision::Extended;
  throw InvalidInput("DEFOSC_PRECISION must be 'double' or 'extended', got '" + std::string(env) + "'");
}

const char* to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

// ---------------------------------------------------------------- options

void add_family_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "registered family name")->capture_default_str();
  sub->add_option("--params", o.params, "family parameters as a JSON object");
  sub->add_option("--a", o.a, "little q-Jacobi a (number, q, q^k)");
  sub->add_option("--b", o.b, "little q-Jacobi b (number, q, q^k)");
  sub->add_option("--q", o.q, "deformation q (number or golden)");
  sub->add_option("--alpha", o.alpha, "laguerre / ismail-theta alpha");
  sub->add_option("--theta", o.theta, "ismail-theta theta");
}

void add_output_options(CLI::App* sub, Options& o, const std::string& default_format,
                        const std::vector<std::string>& formats) {
  o.format = default_format;
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  sub->add_option("--out", o.out, "output file (stdout if omitted); metadata goes to <out>.meta.json");
  sub->add_option("--config", o.config, "JSON file of option values; explicit flags win");
}

// Fills options not given on the command line from the config file.
void apply_config(CLI::App* sub, Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw InvalidInput("cannot read config file '" + o.config + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw InvalidInput("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");

  static const std::vector<std::string> known = {"family", "params", "a",     "b", "q",     "alpha",
                                                 "theta",  "dim",    "tol",   "format", "out", "nmax",
                                                 "z",      "operator", "n",   "shift",  "K",   "convention"};
  // options this command lacks are ignored; explicit flags win
  auto given = [&](const std::string& flag) {
    try {
      return sub->get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return true;
    }
  };
  auto as_string = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };

  try {
    for (const auto& [key, v] : cfg.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw InvalidInput("unknown config key '" + key + "'");
      }
      if (given("--" + key)) continue;
      if (key == "family") o.family = v.get<std::string>();
      else if (key == "params") o.params = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "a") o.a = as_string(v);
      else if (key == "b") o.b = as_string(v);
      else if (key == "q") o.q = as_string(v);
      else if (key == "alpha") o.alpha = as_string(v);
      else if (key == "theta") o.theta = as_string(v);
      else if (key == "dim") o.dim = v.get<int>();
      else if (key == "tol") o.tol = v.get<double>();
      else if (key == "format") o.format = v.get<std::string>();
      else if (key == "out") o.out = v.get<std::string>();
      else if (key == "nmax") o.n_max = v.get<int>();
      else if (key == "z") {
        o.z.clear();
        for (const auto& e : v) o.z.push_back(as_string(e));
      } else if (key == "operator") o.op = v.get<std::string>();
      else if (key == "n") o.n = v.get<int>();
      else if (key == "shift") o.shift = v.get<int>();
      else if (key == "K") o.K = v.get<int>();
      else if (key == "convention") o.convention = v.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw InvalidInput("config file: " + std::string(e.what()));
  }
}

json number_or_string(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  return s;
}

json family_params(const Options& o) {
  json p;
  try {
    p = json::parse(o.params);
  } catch (const json::exception& e) {
    throw InvalidInput("--params is not valid JSON: " + std::string(e.what()));
  }
  if (!p.is_object()) throw InvalidInput("--params must be a JSON object");
  if (!o.a.empty()) p["a"] = number_or_string(o.a);
  if (!o.b.empty()) p["b"] = number_or_string(o.b);
  if (!o.q.empty()) p["q"] = number_or_string(o.q);
  if (!o.alpha.empty()) p["alpha"] = number_or_string(o.alpha);
  if (!o.theta.empty()) p["theta"] = number_or_string(o.theta);
  return p;
}

// "0.3", "0.3+0.2i", "-0.1-0.5i", "0.2i", "i"
template <typename Scalar>
std::complex<Scalar> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  auto num = [&](const std::string& t) -> Scalar {
    if (t.empty() || t == "+") return Scalar(1);
    if (t == "-") return Scalar(-1);
    std::size_t used = 0;
    long double x = 0;
    try {
      x = std::stold(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw InvalidInput("malformed complex number '" + text + "'");
    return Scalar(x);
  };
  if (s.empty()) throw InvalidInput("empty complex number");
  if (s.back() != 'i') return {num(s), Scalar(0)};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {Scalar(0), num(s)};
  return {num(s.substr(0, split)), num(s.substr(split))};
}

// ---------------------------------------------------------------- output

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Run {
  std::string command;
  std::vector<std::string> argv;
  Precision precision = Precision::Double;
};

void emit(const Options& o, const Run& run, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + o.out + "'");
  f << payload;
  std::ofstream meta(o.out + ".meta.json", std::ios::binary);
  const json m = {{"schema_version", io::kSchemaVersion},
                  {"tool", "defosc"},
                  {"version", DEFOSC_VERSION},
                  {"command", run.command},
                  {"argv", run.argv},
                  {"precision", to_string(run.precision)},
                  {"generated_at", utc_timestamp()}};
  meta << m.dump(2) << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- commands

int cmd_families(const Options& o, const Run& run) {
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& f : registered_families()) arr.push_back(to_json(f));
    emit(o, run, dump({{"schema_version", io::kSchemaVersion}, {"families", arr}}));
  } else {
    std::ostringstream os;
    for (const auto& f : registered_families()) {
      os << f.name << ": " << f.description << '\n';
      for (const auto& p : f.parameters) {
        os << "    " << p.name << " (" << p.type << ", default " << io::format_number(p.default_value)
           << "): " << p.description << '\n';
      }
    }
    emit(o, run, os.str());
  }
  return kExitOk;
}

template <typename Scalar>
int cmd_verify(const Options& o, const Run& run) {
  const json params = family_params(o);
  const auto seq = make_family<Scalar>(o.family, params);
  const Scalar tol = o.tol > 0 ? Scalar(o.tol) : Scalar(1e-10);
  const auto report = verify_algebra(seq, o.dim, tol);
  json j = io::to_json(report);
  j["family"] = o.family;
  j["params"] = params;
  j["precision"] = to_string(run.precision);
  emit(o, run, dump(j));
  return report.all_passed() ? kExitOk : kExitFailed;
}

template <typename Scalar>
int cmd_classify(const Options& o, const Run& run) {
  const json params = family_params(o);
  const auto seq = make_family<Scalar>(o.family, params);
  const Scalar tol = o.tol > 0 ? Scalar(o.tol) : Scalar(1e-9);
  if (o.format == "csv") {
    const int j_max = std::min(8, o.n_max - 2);
    std::ostringstream os;
    io::write_csv(os, difference_table(seq, o.n_max, j_max));
    emit(o, run, os.str());
    return kExitOk;
  }
  const auto r = classify(seq, o.n_max, tol);
  json j = io::to_json(r, o.family);
  j["params"] = params;
  emit(o, run, dump(j));
  return kExitOk;
}

template <typename Scalar>
struct CoherentRow {
  std::complex<Scalar> z;
  std::string flag;  // empty when the state was built
  Scalar norm{}, residual{}, product{}, bound{}, tail{};
};

template <typename Scalar>
CoherentRow<Scalar> coherent_row(const CoefficientSequence<Scalar>& seq, std::complex<Scalar> z, int dim, Scalar tol) {
  CoherentRow<Scalar> row;
  row.z = z;
  try {
    const auto st = make_state(seq, z, dim, tol);
    const auto u = uncertainty(st, seq);
    row.norm = st.norm_constant;
    row.tail = st.tail_bound;
    row.residual = eigen_residual(st, seq);
    row.product = u.product();
    row.bound = u.bound;
  } catch (const InsufficientTruncationError& e) {
    row.flag = "insufficient_truncation";
    if (e.suggested_dim() > 0) row.flag += ":" + std::to_string(e.suggested_dim());
  } catch (const DivergenceError&) {
    row.flag = "divergent";
  } catch (const ZeroCoefficientError&) {
    row.flag = "zero_coefficient";
  }
  return row;
}

template <typename Scalar>
int cmd_coherent(const Options& o, const Run& run) {
  const json params = family_params(o);
  const auto seq = make_family<Scalar>(o.family, params);
  if (o.z.empty()) throw InvalidInput("coherent: --z grid is empty");
  if (o.dim < 3) throw DimensionError("coherent: dim must be >= 3");
  const Scalar tol = o.tol > 0 ? Scalar(o.tol) : Scalar(1e-14);

  std::vector<std::complex<Scalar>> grid;
  for (const auto& s : o.z) grid.push_back(parse_complex<Scalar>(s));

  // one task per row; collected in grid order
  std::vector<std::future<CoherentRow<Scalar>>> tasks;
  for (const auto& z : grid) tasks.push_back(std::async(std::launch::async, [&, z] { return coherent_row(seq, z, o.dim, tol); }));
  std::vector<CoherentRow<Scalar>> rows;
  for (auto& t : tasks) rows.push_back(t.get());

  bool flagged = false;
  auto f = [](Scalar x) { return io::format_number(static_cast<double>(x)); };
  if (o.format == "csv") {
    std::ostringstream os;
    os << "z_re,z_im,dim,norm_constant,residual,dXdP,bound,gap,tail_bound,flag\n";
    for (const auto& r : rows) {
      os << f(r.z.real()) << ',' << f(r.z.imag()) << ',' << o.dim << ',';
      if (r.flag.empty()) {
        os << f(r.norm) << ',' << f(r.residual) << ',' << f(r.product) << ',' << f(r.bound) << ','
           << f(r.product - r.bound) << ',' << f(r.tail) << ",\n";
      } else {
        flagged = true;
        os << ",,,,,," << r.flag << '\n';
      }
    }
    emit(o, run, os.str());
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = {{"z", {static_cast<double>(r.z.real()), static_cast<double>(r.z.imag())}}};
      if (r.flag.empty()) {
        row["norm_constant"] = static_cast<double>(r.norm);
        row["residual"] = static_cast<double>(r.residual);
        row["dXdP"] = static_cast<double>(r.product);
        row["bound"] = static_cast<double>(r.bound);
        row["tail_bound"] = static_cast<double>(r.tail);
        row["flag"] = nullptr;
      } else {
        flagged = true;
        row["flag"] = r.flag;
      }
      arr.push_back(std::move(row));
    }
    emit(o, run,
         dump({{"schema_version", io::kSchemaVersion},
               {"family", o.family},
               {"params", params},
               {"dim", o.dim},
               {"rows", arr}}));
  }
  return flagged ? kExitFailed : kExitOk;
}

template <typename Scalar>
int cmd_matrices_export(const Options& o, const Run& run) {
  const json params = family_params(o);
  const auto seq = make_family<Scalar>(o.family, params);
  const auto ops = build_operators(seq, o.dim);
  const std::vector<std::pair<std::string, const BandMatrix<Scalar>*>> all = {
      {"X", &ops.X},      {"P", &ops.P}, {"a+", &ops.raise}, {"a-", &ops.lower},
      {"N", &ops.number}, {"B", &ops.structure}, {"H", &ops.hamiltonian}};

  std::vector<std::pair<std::string, const BandMatrix<Scalar>*>> chosen;
  for (const auto& entry : all) {
    if (o.op == "all" || o.op == entry.first) chosen.push_back(entry);
  }
  if (chosen.empty()) throw InvalidInput("unknown operator '" + o.op + "'");

  if (o.format == "csv") {
    if (chosen.size() != 1) throw InvalidInput("csv export needs a single --operator");
    std::ostringstream os;
    io::write_csv(os, *chosen.front().second);
    emit(o, run, os.str());
    return kExitOk;
  }
  json mats = json::object();
  for (const auto& [name, m] : chosen) mats[name] = io::to_json(*m);
  emit(o, run,
       dump({{"schema_version", io::kSchemaVersion},
             {"family", o.family},
             {"params", params},
             {"dim", o.dim},
             {"operators", mats}}));
  return kExitOk;
}

template <typename Scalar>
int cmd_state_export(const Options& o, const Run& run) {
  const json params = family_params(o);
  const auto seq = make_family<Scalar>(o.family, params);
  if (o.z.size() != 1) throw InvalidInput("state export: exactly one --z value required");
  const auto z = parse_complex<Scalar>(o.z.front());
  const Scalar tol = o.tol > 0 ? Scalar(o.tol) : Scalar(1e-14);
  try {
    const auto st = make_state(seq, z, o.dim, tol);
    json j = io::to_json(st, eigen_residual(st, seq));
    j["family"] = o.family;
    j["params"] = params;
    emit(o, run, dump(j));
    return kExitOk;
  } catch (const InsufficientTruncationError& e) {
    std::cerr << "defosc: " << e.what();
    if (e.suggested_dim() > 0) std::cerr << " (try --dim " << e.suggested_dim() << ")";
    std::cerr << '\n';
    return kExitFailed;
  } catch (const DivergenceError& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitFailed;
  }
}

void check_exact_limit(int n, const char* what) {
  if (n < 0) throw InvalidInput(std::string(what) + " must be >= 0");
  if (n > kExactLimit) {
    throw InvalidInput(std::string(what) + " = " + std::to_string(n) + " exceeds the exact-mode limit " +
                       std::to_string(kExactLimit));
  }
}

int cmd_fib_numbers(const Options& o, const Run& run) {
  check_exact_limit(o.n, "--n");
  json values = json::array();
  bool doubling_ok = true, chebyshev_ok = true;
  for (int k = 0; k <= o.n; ++k) {
    const BigInt f = fib(k);
    values.push_back(f.str());
    doubling_ok = doubling_ok && f == fib_doubling(k);
    // exact in double while F fits in 53 bits
    if (k <= 70) chebyshev_ok = chebyshev_ok && fib_via_chebyshev<double>(k) == f.convert_to<double>();
  }
  const bool ok = doubling_ok && chebyshev_ok;
  if (o.format == "text") {
    emit(o, run, fib(o.n).str() + "\n");
  } else {
    emit(o, run,
         dump({{"schema_version", io::kSchemaVersion},
               {"command", "fib numbers"},
               {"n", o.n},
               {"value", fib(o.n).str()},
               {"sequence", values},
               {"doubling_agrees", doubling_ok},
               {"chebyshev_agrees", chebyshev_ok},
               {"passed", ok}}));
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_fib_filbert(const Options& o, const Run& run) {
  check_exact_limit(o.n, "--n");
  if (o.n < 1) throw InvalidInput("--n must be >= 1");
  const auto m = filbert_matrix(o.n, o.shift);
  const auto inv = exact_inverse(m);
  const bool integral = inv.is_integer();
  const bool identity = m * inv == RationalMatrix::identity(o.n);
  if (o.format == "text") {
    emit(o, run, std::string("integer inverse: ") + (integral ? "true" : "false") + "\n");
  } else {
    emit(o, run,
         dump({{"schema_version", io::kSchemaVersion},
               {"command", "fib filbert"},
               {"n", o.n},
               {"shift", o.shift},
               {"integer_inverse", integral},
               {"identity_check", identity},
               {"matrix", io::to_json(m)},
               {"inverse", io::to_json(inv)},
               {"passed", integral && identity}}));
  }
  return integral && identity ? kExitOk : kExitFailed;
}

int cmd_fib_berg(const Options& o, const Run& run) {
  check_exact_limit(o.n_max, "--nmax");
  if (o.n_max < 2) throw InvalidInput("--nmax must be >= 2");
  FibConvention conv;
  if (o.convention == "classical") conv = FibConvention::Classical;
  else if (o.convention == "shifted") conv = FibConvention::Shifted;
  else throw InvalidInput("--convention must be 'classical' or 'shifted'");
  const double threshold = o.tol > 0 ? o.tol : 1e-8;

  json j = {{"schema_version", io::kSchemaVersion},
            {"command", "fib berg"},
            {"nmax", o.n_max},
            {"convention", o.convention},
            {"carrier", "cpp_bin_float_50"},
            {"threshold", threshold}};
  bool ok = false;
  try {
    const auto rep = berg_orthogonality<HighPrecision>(o.n_max, conv);
    json gram = json::array();
    for (const auto& row : rep.gram) {
      json r = json::array();
      for (const auto& v : row) r.push_back(static_cast<double>(v));
      gram.push_back(std::move(r));
    }
    ok = rep.max_normalized_offdiag < HighPrecision(threshold) && rep.min_diagonal > 0;
    j["calibration"] = {{"alpha", static_cast<double>(rep.calibration.alpha)},
                        {"beta", static_cast<double>(rep.calibration.beta)}};
    j["gram"] = std::move(gram);
    j["max_normalized_offdiag"] = static_cast<double>(rep.max_normalized_offdiag);
    j["min_diagonal"] = static_cast<double>(rep.min_diagonal);
    j["error"] = nullptr;
  } catch (const ConsistencyError& e) {
    j["calibration"] = nullptr;
    j["error"] = e.what();
  }
  j["passed"] = ok;
  if (o.format == "text") {
    std::ostringstream os;
    if (j["error"].is_null()) {
      os << "alpha " << io::format_number(j["calibration"]["alpha"]) << " beta "
         << io::format_number(j["calibration"]["beta"]) << '\n';
      for (const auto& row : j["gram"]) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << io::format_number(row[k].get<double>());
        os << '\n';
      }
      os << "max off-diagonal " << io::format_number(j["max_normalized_offdiag"].get<double>()) << '\n';
    } else {
      os << "error: " << j["error"].get<std::string>() << '\n';
    }
    emit(o, run, os.str());
  } else {
    emit(o, run, dump(j));
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_fib_ismail(const Options& o, const Run& run) {
  check_exact_limit(o.n, "--n");
  if (o.n < 1) throw InvalidInput("--n must be >= 1");
  double theta = theta0<double>();
  if (!o.theta.empty()) {
    const json t = number_or_string(o.theta);
    if (!t.is_number()) throw InvalidInput("--theta must be a number");
    theta = t.get<double>();
  }
  if (!(theta > 0)) throw InvalidInput("--theta must be > 0");
  if (o.K < 1) throw InvalidInput("--K must be >= 1");
  const double rel_tol = o.tol > 0 ? o.tol : 1e-12;

  bool ok = true;
  json seq = json::array();
  for (int n = 1; n <= o.n; ++n) {
    const double c = ismail_fib_closed(theta, n), r = ismail_fib_recurrence(theta, n);
    const double rel = std::abs(c - r) / std::abs(c);
    ok = ok && rel <= rel_tol;
    seq.push_back({{"n", n}, {"closed_form", c}, {"recurrence", r}, {"relative_difference", rel}});
  }
  const double q = -std::exp(-2 * theta);
  json moments = json::array();
  for (int alpha : {1, 2}) {
    for (int n = 0; n <= 6; ++n) {
      const auto m = nu_moments(n, alpha, theta, q, o.K);
      const double diff = std::abs(m.truncated - m.closed_form);
      const bool within = diff <= m.tail_bound + m.rounding;
      ok = ok && within;
      moments.push_back({{"n", n},
                         {"alpha", alpha},
                         {"truncated", m.truncated},
                         {"closed_form", m.closed_form},
                         {"difference", diff},
                         {"tail_bound", m.tail_bound},
                         {"within_bound", within}});
    }
  }
  emit(o, run,
       dump({{"schema_version", io::kSchemaVersion},
             {"command", "fib ismail"},
             {"theta", theta},
             {"q", q},
             {"K", o.K},
             {"sequence", seq},
             {"nu_moments", moments},
             {"passed", ok}}));
  return ok ? kExitOk : kExitFailed;
}

template <typename Fn>
int with_precision(Precision p, Fn&& fn) {
  return p == Precision::Double ? fn(double{}) : fn(static_cast<long double>(0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized oscillator toolkit: recurrences, ladder algebra, coherent states, Fibonacci checks"};
  app.set_version_flag("--version", DEFOSC_VERSION);
  app.require_subcommand(1);

  Options o;
  Run run;
  for (int k = 1; k < argc; ++k) run.argv.emplace_back(argv[k]);
  std::function<int()> action;

  auto* families = app.add_subcommand("families", "list registered families");
  add_output_options(families, o, "json", {"json", "text"});
  families->callback([&] { action = [&] { return cmd_families(o, run); }; });

  auto* verify = app.add_subcommand("verify", "check the generalized Heisenberg relations");
  add_family_options(verify, o);
  verify->add_option("--dim", o.dim, "truncation dimension")->capture_default_str();
  verify->add_option("--tol", o.tol, "residual tolerance (default 1e-10)");
  add_output_options(verify, o, "json", {"json"});
  verify->callback([&] {
    action = [&] { return with_precision(run.precision, [&](auto s) { return cmd_verify<decltype(s)>(o, run); }); };
  });

  auto* cls = app.add_subcommand("classify", "dimension of the oscillator algebra");
  add_family_options(cls, o);
  cls->add_option("--nmax", o.n_max, "largest tested n")->capture_default_str();
  cls->add_option("--tol", o.tol, "relative tolerance (default 1e-9)");
  add_output_options(cls, o, "json", {"json", "csv"});
  cls->callback([&] {
    action = [&] { return with_precision(run.precision, [&](auto s) { return cmd_classify<decltype(s)>(o, run); }); };
  });

  auto* coh = app.add_subcommand("coherent", "coherent-state scan over a z grid");
  add_family_options(coh, o);
  coh->add_option("--z", o.z, "grid points, e.g. 0.5 or 0.3+0.2i; comma separated or repeated")
      ->delimiter(',')
      ->required();
  coh->add_option("--dim", o.dim, "truncation dimension")->capture_default_str();
  coh->add_option("--tol", o.tol, "tail tolerance (default 1e-14)");
  add_output_options(coh, o, "csv", {"csv", "json"});
  coh->callback([&] {
    action = [&] { return with_precision(run.precision, [&](auto s) { return cmd_coherent<decltype(s)>(o, run); }); };
  });

  auto* matrices = app.add_subcommand("matrices", "operator matrices");
  matrices->require_subcommand(1);
  auto* mexport = matrices->add_subcommand("export", "write X, P, a+, a-, N, B, H");
  add_family_options(mexport, o);
  mexport->add_option("--dim", o.dim, "truncation dimension")->capture_default_str();
  mexport->add_option("--operator", o.op, "all, X, P, a+, a-, N, B or H")->capture_default_str();
  add_output_options(mexport, o, "json", {"json", "csv"});
  mexport->callback([&] {
    action = [&] {
      return with_precision(run.precision, [&](auto s) { return cmd_matrices_export<decltype(s)>(o, run); });
    };
  });

  auto* state = app.add_subcommand("state", "coherent state vectors");
  state->require_subcommand(1);
  auto* sexport = state->add_subcommand("export", "write one coherent state");
  add_family_options(sexport, o);
  sexport->add_option("--z", o.z, "eigenvalue, e.g. 0.3+0.1i")->required();
  sexport->add_option("--dim", o.dim, "truncation dimension")->capture_default_str();
  sexport->add_option("--tol", o.tol, "tail tolerance (default 1e-14)");
  add_output_options(sexport, o, "json", {"json"});
  sexport->callback([&] {
    action = [&] { return with_precision(run.precision, [&](auto s) { return cmd_state_export<decltype(s)>(o, run); }); };
  });

  auto* fibc = app.add_subcommand("fib", "Fibonacci, Filbert, Berg and Ismail checks");
  fibc->require_subcommand(1);
  auto* numbers = fibc->add_subcommand("numbers", "fib(0..n) with F_0 = F_1 = 1");
  numbers->add_option("--n", o.n, "largest index")->capture_default_str();
  add_output_options(numbers, o, "json", {"json", "text"});
  numbers->callback([&] { action = [&] { return cmd_fib_numbers(o, run); }; });

  auto* filbert = fibc->add_subcommand("filbert", "exact inverse of the Filbert matrix");
  filbert->add_option("--n", o.n, "matrix size")->capture_default_str();
  filbert->add_option("--shift", o.shift, "entries 1/F_{i+j+shift}, classical indexing")->capture_default_str();
  add_output_options(filbert, o, "json", {"json", "text"});
  filbert->callback([&] { action = [&] { return cmd_fib_filbert(o, run); }; });

  auto* berg = fibc->add_subcommand("berg", "orthogonality under the reciprocal Fibonacci moments");
  berg->add_option("--nmax", o.n_max, "largest degree")->capture_default_str();
  berg->add_option("--convention", o.convention, "moment indexing: classical or shifted")->capture_default_str();
  berg->add_option("--tol", o.tol, "off-diagonal threshold (default 1e-8)");
  add_output_options(berg, o, "json", {"json", "text"});
  berg->callback([&] { action = [&] { return cmd_fib_berg(o, run); }; });

  auto* ismail = fibc->add_subcommand("ismail", "theta-Fibonacci sequence and nu-measure moments");
  ismail->add_option("--theta", o.theta, "theta > 0 (default: sinh theta = 1/2)");
  ismail->add_option("--n", o.n, "largest index")->capture_default_str();
  ismail->add_option("--K", o.K, "atoms in the truncated moment sums")->capture_default_str();
  ismail->add_option("--tol", o.tol, "relative tolerance (default 1e-12)");
  add_output_options(ismail, o, "json", {"json"});
  ismail->callback([&] { action = [&] { return cmd_fib_ismail(o, run); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    run.precision = precision_from_env();
    CLI::App* leaf = app.get_subcommands().front();
    run.command = leaf->get_name();
    while (!leaf->get_subcommands().empty()) {
      leaf = leaf->get_subcommands().front();
      run.command += " " + leaf->get_name();
    }
    apply_config(leaf, o);
    return action();
  } catch (const InvalidInput& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParameterDomainError& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DegenerateParameterError& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NonPositiveDefiniteError& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const defosc::Error& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "defosc: " << e.what() << '\n';
    return kExitFailed;
  }
}
