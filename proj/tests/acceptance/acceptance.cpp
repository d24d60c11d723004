#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <string>
#include <vector>

#include "defosc/classifier.hpp"
#include "defosc/coherent.hpp"
#include "defosc/fibonacci.hpp"
#include "defosc/oscillator.hpp"
#include "defosc/recurrence.hpp"

using namespace defosc;
namespace fs = std::filesystem;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << " [" << title << "]: " << (ok ? "PASS" : "FAIL") << "  " << detail << "\n";
  if (!ok) ++failures;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void algebra() {
  const auto t0 = Clock::now();
  const std::vector<CoefficientSequence<double>> families = {harmonic<double>(), chebyshev_t<double>(),
                                                             chebyshev_u<double>(), laguerre<double>(0.5),
                                                             fibonacci_golden<double>()};
  const std::vector<std::string> required = {"lowering_raising_commutator", "number_raising_commutator",
                                             "number_lowering_commutator", "hamiltonian_spectrum", "center_vanishes"};
  bool ok = true;
  double worst = 0;
  std::string worst_where;
  for (const auto& seq : families) {
    const auto rep = verify_algebra(seq, 64, 1e-10);
    for (const auto& r : rep.relations) {
      if (std::find(required.begin(), required.end(), r.name) == required.end()) continue;
      if (r.interior_residual > worst) {
        worst = r.interior_residual;
        worst_where = seq.name() + "/" + r.name;
      }
      ok = ok && r.interior_residual < 1e-10;
    }
  }
  const double elapsed = seconds_since(t0);
  verdict(1, "algebra relations", ok && elapsed < 5.0,
          "max interior residual " + sci(worst) + " (" + worst_where + "), " + sci(elapsed) + " s");
}

void dimension() {
  bool ok = true;
  std::string detail;
  const auto lag = classify(laguerre<double>(0.5), 64, 1e-9);
  ok = ok && lag.verdict == Verdict::Finite && std::abs(lag.beta0 - 1.5) < 1e-12 && std::abs(lag.beta2 - 1.0) < 1e-12 &&
       lag.dim == 4;
  const auto cheb = classify(chebyshev_t<double>(), 64, 1e-9);
  ok = ok && cheb.verdict == Verdict::Infinite;
  const auto gold = classify(fibonacci_golden<double>(), 64, 1e-9);
  ok = ok && gold.verdict == Verdict::Infinite;
  detail += std::string("laguerre ") + to_string(lag.verdict) + ", chebyshev-t " + to_string(cheb.verdict) +
            ", golden " + to_string(gold.verdict);

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> beta0(0.1, 5.0), beta2(0.0, 3.0);
  int recovered = 0;
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const double b0 = beta0(rng), b2 = beta2(rng);
    const auto seq = custom_sequence<double>(
        "quadratic", [=](int n) { return std::pair<double, double>{0.0, std::sqrt((b0 + b2 * n) * (1.0 + n))}; }, true);
    const auto r = classify(seq, 64, 1e-9);
    const double err = std::max(std::abs(r.beta0 - b0), std::abs(r.beta2 - b2));
    worst = std::max(worst, err);
    if (r.verdict == Verdict::Finite && err < 1e-12) ++recovered;
  }
  ok = ok && recovered == 100;
  const auto np = custom_sequence<double>(
      "n2+1", [](int n) { return std::pair<double, double>{0.0, std::sqrt(double(n) * n + 1.0)}; }, true);
  const auto npr = classify(np, 64, 1e-9);
  ok = ok && npr.verdict == Verdict::Infinite;
  detail += "; random quadratics " + std::to_string(recovered) + "/100 (max beta error " + sci(worst) + "); n^2+1 " +
            to_string(npr.verdict);
  verdict(2, "dimension theorem", ok, detail);
}

void coherent() {
  bool harmonic_ok = true;
  double worst_norm = 0, worst_res = 0, worst_gap = 0;
  const auto h = harmonic<double>();
  for (const cd z : {cd(0.0), cd(0.3), cd(0.5, 0.5), cd(0.0, -0.8), cd(1.0), cd(-0.6, 0.8)}) {
    const double r2 = std::norm(z);
    worst_norm = std::max(worst_norm, std::abs(normalization(h, r2) - std::exp(r2)) / std::exp(r2));
    const auto st = make_state(h, z, 64);
    worst_res = std::max(worst_res, eigen_residual(st, h));
    worst_gap = std::max(worst_gap, std::abs(uncertainty(st, h).gap()));
  }
  harmonic_ok = worst_norm < 1e-10 && worst_res < 1e-10 && worst_gap < 1e-9;
  std::string detail = "harmonic: norm err " + sci(worst_norm) + ", residual " + sci(worst_res) + ", gap " +
                       sci(worst_gap) + (harmonic_ok ? " ok" : " FAIL");

  bool golden_ok = true;
  const auto g = fibonacci_golden<double>();
  std::string golden_detail;
  for (const cd z : {cd(0.1), cd(0.0, 0.3), cd(0.5)}) {
    try {
      const auto st = make_state(g, z, 64);
      const double res = full_eigen_residual(st, g);
      if (!(res < 1e-8)) golden_ok = false;
      golden_detail += " |z|=" + sci(std::abs(z)) + " residual " + sci(res);
    } catch (const DivergenceError&) {
      golden_ok = false;
      golden_detail += " |z|=" + sci(std::abs(z)) + " state undefined (normalization diverges)";
    }
  }
  for (const double r2 : {0.01, 0.25}) {
    std::string direct, qs;
    double dv = NAN, qv = NAN;
    try {
      dv = normalization(g, r2);
      direct = sci(dv);
    } catch (const DivergenceError&) {
      direct = "divergent";
    }
    try {
      qv = golden_normalization_qseries(r2).value;
      qs = sci(qv);
    } catch (const DivergenceError&) {
      qs = "divergent";
    }
    if (!(std::abs(dv - qv) <= 1e-9 * std::abs(dv))) golden_ok = false;
    golden_detail += "; N(" + sci(r2) + ") direct " + direct + " q-series " + qs;
  }
  detail += "; golden:" + golden_detail + (golden_ok ? " ok" : " FAIL");
  verdict(3, "coherent states", harmonic_ok && golden_ok, detail);
}

void fibonacci_identities() {
  const std::vector<int> printed = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  bool seq_ok = true;
  for (int n = 0; n < static_cast<int>(printed.size()); ++n) seq_ok = seq_ok && fib(n) == printed[n];
  double worst = 0;
  for (int n = 1; n <= 30; ++n) {
    const double expected = fib(n - 1).convert_to<double>();
    worst = std::max(worst, std::abs(ismail_fib(theta0<double>(), n) - expected) / expected);
  }
  bool cheb_ok = true;
  for (int n = 0; n <= 20; ++n) cheb_ok = cheb_ok && fib_via_chebyshev<double>(n) == fib(n).convert_to<double>();
  verdict(4, "fibonacci identities", seq_ok && worst < 1e-12 && cheb_ok,
          std::string("sequence ") + (seq_ok ? "matches" : "differs") + ", F_n(theta0) max rel err " + sci(worst) +
              ", chebyshev " + (cheb_ok ? "exact" : "inexact"));
}

void filbert() {
  const auto t0 = Clock::now();
  bool ok = true;
  for (int n = 1; n <= 8; ++n) ok = ok && exact_inverse(filbert_matrix(n)).is_integer();
  const double elapsed = seconds_since(t0);
  verdict(5, "filbert integrality", ok && elapsed < 2.0,
          std::string("integer inverses for n <= 8: ") + (ok ? "true" : "false") + ", " + sci(elapsed) + " s");
}

void berg() {
  const auto rep = berg_orthogonality<HighPrecision>(6, FibConvention::Classical);
  const double off = rep.max_normalized_offdiag.convert_to<double>();
  const double diag = rep.min_diagonal.convert_to<double>();
  verdict(6, "berg orthogonality", off < 1e-8 && diag > 0,
          "max normalized off-diagonal " + sci(off) + ", min diagonal " + sci(diag) + ", alpha " +
              sci(rep.calibration.alpha.convert_to<double>()) + ", beta " +
              sci(rep.calibration.beta.convert_to<double>()));
}

void nu() {
  bool ok = true;
  double worst_ratio = 0;
  const double q = golden_q<double>();
  for (const double theta : {0.5, theta0<double>()}) {
    for (const int alpha : {1, 2}) {
      for (int n = 0; n <= 6; ++n) {
        const auto m = nu_moments(n, alpha, theta, q, 200);
        const double diff = std::abs(m.truncated - m.closed_form);
        const double allowed = m.tail_bound + m.rounding;
        worst_ratio = std::max(worst_ratio, diff / allowed);
        ok = ok && diff <= allowed;
      }
    }
  }
  verdict(7, "nu moments", ok, "max |truncated - closed| / (tail bound + rounding) " + sci(worst_ratio));
}

struct RunResult {
  int code;
  std::string payload;
};

RunResult run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(DEFOSC_CLI_PATH) + " " + args + " --out " + out.string() + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return {WEXITSTATUS(status), os.str()};
}

void determinism() {
  const fs::path dir = fs::temp_directory_path() / ("defosc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> commands = {
      "families",
      "verify --family harmonic --dim 64",
      "verify --family chebyshev-t --dim 64",
      "verify --family chebyshev-u --dim 64",
      "verify --family laguerre --alpha 0.5 --dim 64",
      "verify --family little-q-jacobi --a q --b 1 --q golden --dim 64",
      "classify --family laguerre --alpha 0.5",
      "classify --family chebyshev-t",
      "classify --family fibonacci-golden --format csv",
      "coherent --family harmonic --z 0,0.5,1,0.5i,-0.6+0.8i",
      "coherent --family harmonic --z 0.3,0.7 --format json",
      "matrices export --family fibonacci-golden --dim 16",
      "matrices export --family laguerre --dim 8 --operator H --format csv",
      "state export --family harmonic --z 0.5+0.5i --dim 64",
      "fib numbers --n 64",
      "fib filbert --n 8",
      "fib berg --nmax 6",
      "fib ismail --n 30",
  };
  bool ok = true;
  std::string bad;
  for (const auto& c : commands) {
    const auto a = run_cli(c, dir / "a.out");
    const auto b = run_cli(c, dir / "b.out");
    if (a.code != 0 || b.code != 0 || a.payload.empty() || a.payload != b.payload) {
      ok = false;
      bad += " [" + c + "]";
    }
  }
  fs::remove_all(dir);
  verdict(8, "determinism", ok,
          std::to_string(commands.size()) + " commands run twice" + (ok ? ", payloads byte-identical" : "; mismatch:" + bad));
}

}  // namespace

int main() {
  const std::vector<void (*)()> checks = {algebra, dimension, coherent, fibonacci_identities,
                                          filbert, berg,      nu,       determinism};
  for (auto* check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      std::cout << "criterion error: " << e.what() << "\n";
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
