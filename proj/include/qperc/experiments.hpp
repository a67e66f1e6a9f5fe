#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qperc/dataset.hpp"
#include "qperc/grover.hpp"
#include "qperc/perceptron.hpp"

namespace qperc::experiments {

// Seeded uniform shuffle, then the first ceil(fraction * n) points.
LabeledDataset shuffled_prefix_split(const LabeledDataset& ds, double fraction, Rng& rng);

// ---------------------------------------------------------------- fig 1
struct Fig1Params {
  std::string sweep_var = "n";  // "n" (gamma fixed) or "gamma" (n fixed)
  double gamma = 0.01;          // fixed gamma for the n sweep
  std::int64_t n = 1000;        // fixed n for the gamma sweep
  double epsilon = 0.05;
  double from = 0.0;  // 0 -> per-sweep defaults: n in [1e3,1e6], gamma in [1e-6,1e-4]
  double to = 0.0;
  std::int64_t points = 25;
};

struct Fig1Row {
  std::string curve;  // online | version_space | hybrid
  std::string x_var;
  double x = 0.0;
  double value = 0.0;
};

struct Fig1Result {
  std::vector<Fig1Row> rows;
  std::map<std::string, double> slopes;  // log-log slope per curve; empty for 1-point sweeps
};

Fig1Result run_fig1(const Fig1Params& params);
std::string fig1_csv(const Fig1Result& r);
std::string fig1_slopes_csv(const Fig1Result& r);

// ---------------------------------------------------------------- fig 2
struct Fig2Params {
  std::string iris_csv = "data/iris.csv";
  std::int64_t hard_n = 1000;
  double iris_fraction = 0.1;
  double hard_fraction = 0.5;
  double epsilon = 0.05;
  std::int64_t trials = 30;
  std::uint64_t seed = 0;
};

struct Fig2Row {
  std::string dataset;
  std::string algorithm;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  std::int64_t trials = 0;
};

std::vector<Fig2Row> run_fig2(const Fig2Params& params);
std::string fig2_csv(const std::vector<Fig2Row>& rows);

// ---------------------------------------------------------------- fig 3
struct Fig3Params {
  std::int64_t n_items = 64;  // power of two; one marked element
  double p = 0.05;
  std::int64_t m_max = 30;
  std::int64_t trials = 10000;  // Monte Carlo trajectories (bit flip)
  std::uint64_t seed = 0;
};

struct Fig3Row {
  std::string noise_kind;
  std::int64_t m_range = 0;
  double p_estimate = 0.0;
  double std_error = 0.0;
};

std::vector<Fig3Row> run_fig3(const Fig3Params& params);
std::string fig3_csv(const std::vector<Fig3Row>& rows);

// ---------------------------------------------------------------- hard steps
// Classical perceptron wall steps on the first ceil(fraction*n) points of
// the Hard dataset, one-update-per-pass protocol.
std::int64_t run_hard_steps(std::int64_t n, double train_fraction);

// ---------------------------------------------------------------- lemma 1
struct Lemma1Row {
  double gamma = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double exact_wedge = 0.0;  // alpha/pi, alpha = asin(gamma)
  double erf_bound = 0.0;
  std::int64_t trials = 0;
};

std::vector<Lemma1Row> run_lemma1_mc(const std::vector<double>& gamma_values,
                                     std::int64_t trials, std::uint64_t seed);
std::string lemma1_csv(const std::vector<Lemma1Row>& rows);

// ---------------------------------------------------------------- LOO study
struct LooParams {
  double epsilon = 0.1;
  std::int64_t trials = 50;
  std::uint64_t seed = 0;
  GroverBackend backend = GroverBackend::analytic;
};

struct LooTrial {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t k = 0;
  double r_loo = 0.0;
  bool version_space_nonempty = false;  // some drawn hyperplane separates the full sample
};

struct LooResult {
  double gamma = 0.0;  // measured margin of the full sample
  std::int64_t n = 0;
  std::int64_t k = 0;
  double k_over_n = 0.0;
  double generalization_bound = 0.0;  // at sample size n-1 (the fold size)
  double mean_r_loo = 0.0;
  double stderr_r_loo = 0.0;
  std::vector<LooTrial> trials;
};

LooResult run_loo_study(const LabeledDataset& ds, const LooParams& params);
std::string loo_csv(const LooResult& r);

// ---------------------------------------------------------------- dispatch
// Name in {fig1, fig2, fig3, hard-steps, lemma1, loo}; writes
// <output_dir>/<experiment>.csv (+ .meta); hard-steps instead returns the
// step count in stdout_line.
struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

struct ExperimentOutcome {
  std::vector<std::string> files_written;
  std::string stdout_line;
};

ExperimentOutcome run_experiment(const ExperimentSpec& spec);

}  // namespace qperc::experiments
