// Acceptance suite: runs every suite-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failures.

#include <array>
#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qperc/bounds.hpp"
#include "qperc/csvio.hpp"
#include "qperc/dataset.hpp"
#include "qperc/experiments.hpp"
#include "qperc/grover.hpp"
#include "qperc/perceptron.hpp"

using namespace qperc;
namespace ex = qperc::experiments;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
  std::printf("%s criterion %2d: %s (%.1fs%s%s)\n", ok ? "PASS" : "FAIL", num, name.c_str(),
              seconds, detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void run_criterion(int num, const std::string& name, double time_limit_s,
                   const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  report(num, name, ok, seconds, detail);
}

std::string run_cli(const std::string& args, int& exit_code) {
  const std::string cmd = std::string(QPERC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return "";
  }
  std::string output;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

GroverInstance prefix_marked(std::int64_t n, std::int64_t marked) {
  GroverInstance inst;
  inst.n_items = n;
  inst.marked = [marked](std::int64_t i) { return i < marked; };
  inst.marked_count_hint = marked;
  return inst;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

}  // namespace

int main() {
  // 1. Hard-dataset step count through the CLI, exact.
  run_criterion(1, "hard-steps CLI prints exactly 250500", 5.0, [](std::string& detail) {
    int code = 0;
    const std::string out = run_cli("experiment hard-steps --n 1000 --train-fraction 0.5", code);
    detail = "output " + out.substr(0, out.find('\n'));
    return code == 0 && out == "250500\n";
  });

  // 2. Hard(1000) margin equals 1/sqrt(1000) within 1e-9.
  run_criterion(2, "margin(Hard(1000)) = 1/sqrt(1000) +- 1e-9", 10.0,
                [](std::string& detail) {
                  const double gamma = margin(make_hard_dataset(1000)).gamma;
                  const double err = std::abs(gamma - 1.0 / std::sqrt(1000.0));
                  detail = fmt("gamma %.12f, err %.2e", gamma, err);
                  return err < 1e-9;
                });

  // 3. QSearch success >= 1/4 on random instances.
  run_criterion(3, "QSearch empirical success >= 1/4 - 3se", 60.0, [](std::string& detail) {
    Rng rng(301);
    double worst_margin = 1e300;
    for (int inst_i = 0; inst_i < 20; ++inst_i) {
      const std::int64_t n = 8 + rng.uniform_below(249);           // [8, 256]
      const std::int64_t marked = 1 + rng.uniform_below(n / 2);    // [1, N/2]
      const GroverInstance inst = prefix_marked(n, marked);
      const std::int64_t trials = 10000;
      std::int64_t hits = 0;
      Rng inst_rng = rng.fork(static_cast<std::uint64_t>(inst_i));
#pragma omp parallel for schedule(static) reduction(+ : hits)
      for (std::ptrdiff_t t = 0; t < trials; ++t) {
        Rng tr = inst_rng.fork(static_cast<std::uint64_t>(t));
        if (inst.marked(qsearch(inst, GroverBackend::analytic, NoiseModel::none(), tr).index))
          ++hits;
      }
      const double p = static_cast<double>(hits) / static_cast<double>(trials);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
      worst_margin = std::min(worst_margin, p - (0.25 - 3.0 * se));
      if (p < 0.25 - 3.0 * se) {
        detail = fmt("failed at N, |M|, p = %.0f, %.0f, %.4f", (double)n, (double)marked, p);
        return false;
      }
    }
    detail = fmt("20 instances, worst slack %.4f", worst_margin);
    return true;
  });

  // 4. Exact statevector probabilities equal the rotation formula.
  run_criterion(4, "statevector equals sin^2((2j+1)theta) within 1e-9", 30.0,
                [](std::string& detail) {
                  double worst = 0.0;
                  for (std::int64_t n : {2, 4, 8, 16}) {
                    for (std::int64_t mc = 1; mc <= n; ++mc) {
                      const GroverInstance inst = prefix_marked(n, mc);
                      const double theta = theta_from_fraction(
                          static_cast<double>(mc) / static_cast<double>(n));
                      for (std::int64_t j = 0; j <= 10; ++j) {
                        worst = std::max(worst,
                                         std::abs(statevector_marked_probability(inst, j) -
                                                  success_probability(theta, j)));
                      }
                    }
                  }
                  detail = fmt("worst |diff| %.2e", worst);
                  return worst < 1e-9;
                });

  // 5. P(M): closed form vs sum, envelope, depolarizing trajectories, ordering.
  run_criterion(5, "P(M) closed form, envelope, and noisy-curve checks", 120.0,
                [](std::string& detail) {
    Rng rng(305);
    double worst_sum = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const double theta = 1e-3 + (M_PI / 2 - 2e-3) * rng.uniform();
      const std::int64_t m = 1 + rng.uniform_below(200);
      double mean = 0.0;
      for (std::int64_t j = 0; j < m; ++j) mean += success_probability(theta, j);
      mean /= static_cast<double>(m);
      worst_sum = std::max(worst_sum, std::abs(avg_success_probability(theta, m) - mean));
    }
    if (worst_sum >= 1e-12) {
      detail = fmt("closed form vs sum deviates by %.2e", worst_sum);
      return false;
    }

    // Envelope: |P(M) - 1/2| <= 1/(2 M sin 2 theta), one marked of 64.
    const GroverInstance inst64 = prefix_marked(64, 1);
    const double theta64 = theta_from_fraction(1.0 / 64.0);
    Rng r1(306);
    for (const PofMPoint& pt :
         p_of_m_curve(inst64, GroverBackend::analytic, NoiseModel::none(), 64, 1, r1)) {
      const double env =
          1.0 / (2.0 * static_cast<double>(pt.m_range) * std::sin(2.0 * theta64));
      if (std::abs(pt.p_estimate - 0.5) > env + 1e-12) {
        detail = fmt("envelope violated at M = %.0f", (double)pt.m_range);
        return false;
      }
    }

    // Depolarizing p = 0.05: analytic formula vs 1e4 trajectories.
    const GroverInstance inst16 = prefix_marked(16, 1);
    Rng r2(307);
    const auto exact = p_of_m_curve(inst16, GroverBackend::analytic,
                                    NoiseModel::depolarizing(0.05), 16, 1, r2);
    const auto mc = p_of_m_curve(inst16, GroverBackend::statevector,
                                 NoiseModel::depolarizing(0.05), 16, 10000, r2);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      worst_z = std::max(worst_z, std::abs(mc[i].p_estimate - exact[i].p_estimate) /
                                      std::max(mc[i].std_error, 1e-12));
    }
    if (worst_z >= 3.0) {
      detail = fmt("trajectory MC off by %.2f se", worst_z);
      return false;
    }

    // Figure-3 reproduction: both noisy curves below the noise-free one
    // for every M >= 2.
    ex::Fig3Params fig3;
    fig3.n_items = 64;
    fig3.p = 0.05;
    fig3.m_max = 30;
    fig3.trials = 10000;
    fig3.seed = 308;
    std::vector<double> clean(fig3.m_max + 1, 0.0), bf(fig3.m_max + 1, 0.0),
        dep(fig3.m_max + 1, 0.0);
    for (const ex::Fig3Row& row : ex::run_fig3(fig3)) {
      if (row.noise_kind == "none") clean[static_cast<std::size_t>(row.m_range)] = row.p_estimate;
      if (row.noise_kind == "bit_flip") bf[static_cast<std::size_t>(row.m_range)] = row.p_estimate;
      if (row.noise_kind == "depolarizing") dep[static_cast<std::size_t>(row.m_range)] = row.p_estimate;
    }
    for (std::int64_t m = 2; m <= fig3.m_max; ++m) {
      if (!(bf[static_cast<std::size_t>(m)] < clean[static_cast<std::size_t>(m)]) ||
          !(dep[static_cast<std::size_t>(m)] < clean[static_cast<std::size_t>(m)])) {
        detail = fmt("noisy curve not below clean at M = %.0f", (double)m);
        return false;
      }
    }
    detail = fmt("sum dev %.1e, trajectory z %.2f", worst_sum, worst_z);
    return true;
  });

  // 6. Novikoff update cap over 100 planted datasets.
  run_criterion(6, "classical updates <= floor(1/gamma^2), 100 planted sets", 60.0,
                [](std::string& detail) {
    Rng rng(309);
    std::int64_t worst_slack = std::int64_t{1} << 40;
    for (int t = 0; t < 100; ++t) {
      const std::int64_t n = 20 + rng.uniform_below(181);  // N <= 200
      const double gamma = 0.05 + 0.25 * rng.uniform();    // [0.05, 0.3]
      const LabeledDataset ds =
          make_planted_margin_dataset(n, 2 + rng.uniform_below(10), gamma, rng.next_u64());
      const RunResult res =
          classical_online(ds, ClassicalProtocol::stream_until_clean, gamma);
      const std::int64_t cap =
          static_cast<std::int64_t>(std::floor(1.0 / (gamma * gamma)));
      worst_slack = std::min(worst_slack, cap - res.ledger.updates);
      if (res.ledger.updates > cap) {
        detail = fmt("cap %.0f exceeded with %.0f updates", (double)cap,
                     (double)res.ledger.updates);
        return false;
      }
    }
    detail = fmt("min cap slack %.0f updates", (double)worst_slack);
    return true;
  });

  // 7. Hybrid perceptron success rate on planted separable data.
  run_criterion(7, "hybrid verified-separator rate >= 85% on planted data", 300.0,
                [](std::string& detail) {
    const double gamma = 0.1, epsilon = 0.1;
    const std::int64_t k = bounds::num_hyperplanes(gamma, epsilon);
    const std::int64_t trials = 200;
    std::int64_t successes = 0;
    const Rng master(310);
#pragma omp parallel for schedule(dynamic) reduction(+ : successes)
    for (std::ptrdiff_t t = 0; t < trials; ++t) {
      Rng tr = master.fork(static_cast<std::uint64_t>(t));
      const LabeledDataset ds = make_planted_margin_dataset(128, 16, gamma, tr.next_u64());
      const auto hps = sample_hyperplanes(k, 16, tr.next_u64());
      const RunResult res = hybrid_quantum(ds, hps, epsilon, GroverBackend::analytic,
                                           NoiseModel::none(), tr.next_u64());
      if (res.separates && verify_separator(res.hyperplane, ds)) ++successes;
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(trials);
    detail = fmt("success rate %.3f with K = %.0f", rate, (double)k);
    return rate >= 0.85;
  });

  // 8. Figure-1 slopes from the bound calculators.
  run_criterion(8, "bound-curve log-log slopes", 10.0, [](std::string& detail) {
    ex::Fig1Params pn;
    pn.sweep_var = "n";
    pn.gamma = 0.01;
    const auto sn = ex::run_fig1(pn).slopes;
    ex::Fig1Params pg;
    pg.sweep_var = "gamma";
    pg.n = 1000;
    const auto sg = ex::run_fig1(pg).slopes;
    detail = fmt("vs N: %.3f/%.3f/%.3f", sn.at("hybrid"), sn.at("online"),
                 sn.at("version_space")) +
             fmt(", vs 1/g: %.3f/%.3f/%.3f", sg.at("hybrid"), sg.at("online"),
                 sg.at("version_space"));
    return std::abs(sn.at("hybrid") - 0.5) <= 0.05 &&
           std::abs(sn.at("online") - 0.5) <= 0.05 &&
           std::abs(sn.at("version_space") - 1.0) <= 0.05 &&
           std::abs(sg.at("hybrid") - 1.0) <= 0.1 &&
           std::abs(sg.at("online") - 2.0) <= 0.1 &&
           std::abs(sg.at("version_space") - 0.5) <= 0.1;
  });

  // 9. Figure-2 ratio ordering.
  run_criterion(9, "fig2: Iris ratios > 1; Hard ratios < 1 with hybrid minimal", 600.0,
                [](std::string& detail) {
    ex::Fig2Params p;
    p.iris_csv = std::string(QPERC_SOURCE_DIR) + "/data/iris.csv";
    p.trials = 30;
    p.seed = 311;
    const auto rows = ex::run_fig2(p);
    double iris_min = 1e300, hard_max = -1e300, hard_hybrid = 0.0, hard_other_min = 1e300;
    std::ostringstream ss;
    for (const ex::Fig2Row& r : rows) {
      ss << r.dataset << "/" << r.algorithm << "=" << format_g(r.mean_ratio) << " ";
      if (r.dataset == "iris") iris_min = std::min(iris_min, r.mean_ratio);
      if (r.dataset == "hard") {
        hard_max = std::max(hard_max, r.mean_ratio);
        if (r.algorithm == "hybrid_quantum") hard_hybrid = r.mean_ratio;
        else hard_other_min = std::min(hard_other_min, r.mean_ratio);
      }
    }
    detail = ss.str();
    return iris_min > 1.0 && hard_max < 1.0 && hard_hybrid < hard_other_min;
  });

  // 10. Lemma-1 wedge Monte Carlo.
  run_criterion(10, "wedge separation probability matches alpha/pi, below erf bound", 60.0,
                [](std::string& detail) {
    const double gamma = std::sin(0.1);  // ~0.0998
    const auto rows = ex::run_lemma1_mc({gamma}, 100000, 312);
    const ex::Lemma1Row& r = rows.front();
    detail = fmt("empirical %.5f, exact %.5f, bound %.4f", r.empirical, r.exact_wedge,
                 r.erf_bound);
    return std::abs(r.empirical - r.exact_wedge) <= 3.0 * r.std_error &&
           r.empirical <= r.erf_bound;
  });

  // 11. Leave-one-out risk study against the expected-error bound.
  run_criterion(11, "LOO: R_loo <= K/N per nonempty trial; mean below the bound", 600.0,
                [](std::string& detail) {
    const LabeledDataset ds = make_planted_margin_dataset(60, 8, 0.1, 1);
    ex::LooParams p;
    p.epsilon = 0.1;
    p.trials = 50;
    p.seed = 313;
    const ex::LooResult r = ex::run_loo_study(ds, p);
    int nonempty = 0;
    for (const ex::LooTrial& t : r.trials) {
      if (!t.version_space_nonempty) continue;
      ++nonempty;
      if (t.r_loo > r.k_over_n) {
        detail = fmt("trial R_loo %.4f above K/N %.4f", t.r_loo, r.k_over_n);
        return false;
      }
    }
    detail = fmt("mean R_loo %.4f vs bound %.4f, nonempty %.0f/50", r.mean_r_loo,
                 r.generalization_bound, (double)nonempty);
    return r.mean_r_loo <= r.generalization_bound + 3.0 * r.stderr_r_loo;
  });

  // 12. Bound-calculator tightness invariants.
  run_criterion(12, "num_hyperplanes ceiling tight; K2 meets the failure budget", 10.0,
                [](std::string& detail) {
    Rng rng(314);
    for (int t = 0; t < 1000; ++t) {
      const double gamma = 1e-4 + 0.4 * rng.uniform();
      const double epsilon = 0.01 + 0.9 * rng.uniform();
      const std::int64_t k = bounds::num_hyperplanes(gamma, epsilon);
      const double log_base = std::log1p(-std::sqrt(2.0) * gamma / std::sqrt(M_PI));
      const double target = std::log(epsilon / 2.0);
      if (!(static_cast<double>(k) * log_base <= target + 1e-9 &&
            static_cast<double>(k - 1) * log_base > target - 1e-9)) {
        detail = fmt("ceiling not tight at gamma %.4f, eps %.3f", gamma, epsilon);
        return false;
      }
      const std::int64_t kk = 2 + rng.uniform_below(500);
      const std::int64_t k2 = bounds::amplification_rounds(kk, epsilon);
      const double miss = std::exp(static_cast<double>(k2) * std::log(0.75));
      if (!(static_cast<double>(kk - 1) * std::log1p(-miss) >=
            std::log1p(-epsilon / 2.0) - 1e-9)) {
        detail = fmt("failure budget missed at K %.0f, eps %.3f", (double)kk, epsilon);
        return false;
      }
    }
    detail = "1000 random inputs";
    return true;
  });

  std::printf("%s: %d of 12 criteria failed\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures;
}
