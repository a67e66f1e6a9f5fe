#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qperc/bounds.hpp"
#include "qperc/csvio.hpp"
#include "qperc/dataset.hpp"
#include "qperc/experiments.hpp"
#include "qperc/grover.hpp"
#include "qperc/perceptron.hpp"
#include "qperc/svg.hpp"

namespace {

using namespace qperc;

std::string default_out_dir() {
  const char* env = std::getenv("QPERC_OUT_DIR");
  return env && *env ? env : "out";
}

GroverBackend parse_backend(const std::string& s) {
  if (s == "analytic") return GroverBackend::analytic;
  if (s == "statevector") return GroverBackend::statevector;
  throw std::invalid_argument("backend must be 'analytic' or 'statevector'");
}

NoiseModel parse_noise(const std::string& kind, double p) {
  if (kind == "none") return NoiseModel::none();
  if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("noise p must be in [0,1]");
  if (kind == "bit-flip") return NoiseModel::bit_flip(p);
  if (kind == "depolarizing") return NoiseModel::depolarizing(p);
  throw std::invalid_argument("noise must be one of none, bit-flip, depolarizing");
}

struct CliState {
  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir();

  // dataset
  std::int64_t gen_n = 8;
  std::int64_t gen_d = 4;
  double gen_gamma = 0.1;
  std::string gen_out;
  std::string margin_file;
  bool margin_sweep = false;

  // run
  std::string run_algorithm;
  std::string run_file;
  double run_epsilon = 0.05;
  double run_gamma = 0.0;  // 0 -> measure
  std::string run_backend = "analytic";
  std::string run_noise = "none";
  double run_p = 0.0;
  std::string run_protocol = "stream";

  // bounds sweep
  std::string sweep_curve = "all";
  std::string sweep_var = "n";
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  std::int64_t sweep_points = 25;
  double sweep_gamma = 0.01;
  std::int64_t sweep_n = 1000;
  double sweep_epsilon = 0.05;
  std::string sweep_out;

  // experiment
  std::string experiment_name;
  std::map<std::string, std::string> experiment_params;

  // plot
  std::string plot_csv, plot_out, plot_x, plot_y, plot_series, plot_title;
  bool plot_logx = false, plot_logy = false;
};

int cmd_gen_hard(const CliState& st) {
  const LabeledDataset ds = make_hard_dataset(st.gen_n);
  const std::string path =
      st.gen_out.empty() ? st.out_dir + "/" + ds.name + ".csv" : st.gen_out;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  export_csv(ds, path);
  std::cout << path << "\n";
  return 0;
}

int cmd_gen_planted(const CliState& st) {
  const LabeledDataset ds =
      make_planted_margin_dataset(st.gen_n, st.gen_d, st.gen_gamma, st.seed);
  const std::string path =
      st.gen_out.empty() ? st.out_dir + "/" + ds.name + ".csv" : st.gen_out;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  export_csv(ds, path);
  std::cout << path << "\n";
  return 0;
}

int cmd_margin(const CliState& st) {
  if (st.margin_file.empty()) throw std::invalid_argument("--file is required");
  const LabeledDataset ds = import_csv(st.margin_file);
  const MarginReport rep = st.margin_sweep ? margin_2d_sweep(ds) : margin(ds);
  std::printf("gamma=%.12g\n", rep.gamma);
  return 0;
}

int cmd_run(const CliState& st) {
  if (!(st.run_epsilon > 0.0) || !(st.run_epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  if (st.run_file.empty()) throw std::invalid_argument("--file is required");
  const LabeledDataset ds = normalize(import_csv(st.run_file));
  const GroverBackend backend = parse_backend(st.run_backend);
  const NoiseModel noise = parse_noise(st.run_noise, st.run_p);

  double gamma = st.run_gamma;
  const bool needs_gamma = st.run_algorithm != "classical";
  if (needs_gamma && gamma <= 0.0) gamma = margin(ds).gamma;
  if (needs_gamma && !(gamma > 0.0)) {
    throw std::runtime_error("dataset is not separable through the origin; pass --gamma");
  }

  Rng rng(st.seed);
  const std::uint64_t hp_seed = rng.next_u64();
  const std::uint64_t run_seed = rng.next_u64();

  RunResult result;
  if (st.run_algorithm == "classical") {
    ClassicalProtocol protocol;
    if (st.run_protocol == "stream") protocol = ClassicalProtocol::stream_until_clean;
    else if (st.run_protocol == "one-per-pass") protocol = ClassicalProtocol::one_update_per_pass;
    else throw std::invalid_argument("protocol must be 'stream' or 'one-per-pass'");
    result = classical_online(ds, protocol,
                              gamma > 0.0 ? std::optional<double>(gamma) : std::nullopt);
  } else if (st.run_algorithm == "online") {
    result = online_quantum(ds, gamma, st.run_epsilon, backend, noise, run_seed);
  } else if (st.run_algorithm == "version-space" || st.run_algorithm == "hybrid") {
    const std::int64_t k = bounds::num_hyperplanes(gamma, st.run_epsilon);
    const std::vector<Hyperplane> hps =
        sample_hyperplanes(k, static_cast<std::int64_t>(ds.dim), hp_seed);
    result = st.run_algorithm == "hybrid"
                 ? hybrid_quantum(ds, hps, st.run_epsilon, backend, noise, run_seed)
                 : version_space_quantum(ds, hps, st.run_epsilon, backend, noise, run_seed);
  } else {
    throw std::invalid_argument(
        "algorithm must be one of classical, online, version-space, hybrid");
  }

  RunContext ctx;
  ctx.dataset = ds.name;
  ctx.n = static_cast<std::int64_t>(ds.size());
  ctx.gamma = gamma;
  ctx.epsilon = st.run_epsilon;
  if (st.run_algorithm != "classical") ctx.backend = backend;
  ctx.noise = noise;
  std::cout << run_result_csv_header() << "\n" << run_result_csv_row(result, ctx) << "\n";
  return 0;
}

int cmd_bounds_sweep(const CliState& st) {
  experiments::Fig1Params params;
  params.sweep_var = st.sweep_var;
  params.gamma = st.sweep_gamma;
  params.n = st.sweep_n;
  params.epsilon = st.sweep_epsilon;
  params.from = st.sweep_from;
  params.to = st.sweep_to;
  params.points = st.sweep_points;
  const experiments::Fig1Result all = experiments::run_fig1(params);

  experiments::Fig1Result filtered;
  for (const experiments::Fig1Row& row : all.rows) {
    if (st.sweep_curve == "all" || st.sweep_curve == row.curve) filtered.rows.push_back(row);
  }
  if (filtered.rows.empty()) {
    throw std::invalid_argument("curve must be one of online, version_space, hybrid, all");
  }
  const std::string path =
      st.sweep_out.empty() ? st.out_dir + "/bounds_sweep.csv" : st.sweep_out;
  write_text_atomic(path, experiments::fig1_csv(filtered));
  std::cout << path << "\n";
  return 0;
}

int cmd_experiment(CliState& st) {
  experiments::ExperimentSpec spec;
  spec.name = st.experiment_name;
  spec.params = st.experiment_params;
  spec.output_dir = st.out_dir;
  spec.seed = st.seed;
  const experiments::ExperimentOutcome outcome = experiments::run_experiment(spec);
  if (!outcome.stdout_line.empty()) std::cout << outcome.stdout_line << "\n";
  for (const std::string& f : outcome.files_written) std::cout << f << "\n";
  return 0;
}

int cmd_plot(const CliState& st) {
  PlotSpec spec;
  spec.x_column = st.plot_x;
  spec.y_column = st.plot_y;
  spec.series_column = st.plot_series;
  spec.log_x = st.plot_logx;
  spec.log_y = st.plot_logy;
  spec.title = st.plot_title;
  const std::string svg = render_svg(st.plot_csv, spec);
  write_text_atomic(st.plot_out, svg);
  std::cout << st.plot_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grover-search perceptron simulator and benchmark suite"};
  app.set_config("--config", "", "key=value configuration file");
  app.fallthrough();
  app.require_subcommand(1);

  CliState st;
  app.add_option("--seed", st.seed, "master RNG seed")->capture_default_str();
  app.add_option("--out-dir", st.out_dir, "output directory (env QPERC_OUT_DIR)")
      ->capture_default_str();

  // dataset
  CLI::App* dataset = app.add_subcommand("dataset", "dataset tooling");
  CLI::App* gen_hard = dataset->add_subcommand("gen-hard", "write the Hard dataset");
  gen_hard->add_option("--n", st.gen_n, "points (= dimension)")->required();
  gen_hard->add_option("--out", st.gen_out, "output CSV path");
  CLI::App* gen_planted =
      dataset->add_subcommand("gen-planted", "write a planted-margin dataset");
  gen_planted->add_option("--n", st.gen_n, "points")->required();
  gen_planted->add_option("--d", st.gen_d, "dimension");
  gen_planted->add_option("--gamma", st.gen_gamma, "planted margin");
  gen_planted->add_option("--out", st.gen_out, "output CSV path");
  CLI::App* margin_cmd = dataset->add_subcommand("margin", "maximum margin of a dataset");
  margin_cmd->add_option("--file", st.margin_file, "dataset CSV (dim,label,x0,...)");
  margin_cmd->add_flag("--sweep-2d", st.margin_sweep, "use the 2-D angular sweep oracle");

  // run
  CLI::App* run = app.add_subcommand("run", "single algorithm run, result row to stdout");
  run->add_option("algorithm", st.run_algorithm,
                  "classical | online | version-space | hybrid")
      ->required();
  run->add_option("--file", st.run_file, "dataset CSV (dim,label,x0,...)");
  run->add_option("--epsilon", st.run_epsilon, "failure probability")->capture_default_str();
  run->add_option("--gamma", st.run_gamma, "margin (measured when omitted)");
  run->add_option("--backend", st.run_backend, "analytic | statevector")
      ->capture_default_str();
  run->add_option("--noise", st.run_noise, "none | bit-flip | depolarizing")
      ->capture_default_str();
  run->add_option("--p", st.run_p, "per-iteration noise probability");
  run->add_option("--protocol", st.run_protocol, "classical: stream | one-per-pass")
      ->capture_default_str();

  // bounds
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "closed-form bound calculators");
  CLI::App* sweep = bounds_cmd->add_subcommand("sweep", "evaluate bound curves over a range");
  sweep->add_option("--curve", st.sweep_curve, "online | version_space | hybrid | all")
      ->capture_default_str();
  sweep->add_option("--var", st.sweep_var, "sweep variable: n | gamma")->capture_default_str();
  sweep->add_option("--from", st.sweep_from, "range start (0 = default range)");
  sweep->add_option("--to", st.sweep_to, "range end (0 = default range)");
  sweep->add_option("--points", st.sweep_points, "sweep points")->capture_default_str();
  sweep->add_option("--gamma", st.sweep_gamma, "fixed gamma for the n sweep")
      ->capture_default_str();
  sweep->add_option("--n", st.sweep_n, "fixed n for the gamma sweep")->capture_default_str();
  sweep->add_option("--epsilon", st.sweep_epsilon, "failure probability")
      ->capture_default_str();
  sweep->add_option("--out", st.sweep_out, "output CSV path");

  // experiment
  CLI::App* experiment = app.add_subcommand("experiment", "paper experiment runners");
  experiment->add_option("name", st.experiment_name,
                         "fig1 | fig2 | fig3 | hard-steps | lemma1 | loo")
      ->required();
  std::map<std::string, std::string> exp_opts;
  for (const char* key :
       {"n", "d", "gamma", "train-fraction", "trials", "epsilon", "var", "from", "to",
        "points", "p", "m-max", "n-items", "iris-csv", "hard-n", "iris-fraction",
        "hard-fraction", "gammas", "data-seed"}) {
    experiment->add_option(std::string("--") + key, exp_opts[key]);
  }

  // plot
  CLI::App* plot = app.add_subcommand("plot", "render a runner CSV as SVG");
  plot->add_option("--csv", st.plot_csv, "input CSV")->required();
  plot->add_option("--out", st.plot_out, "output SVG path")->required();
  plot->add_option("--x", st.plot_x, "x column")->required();
  plot->add_option("--y", st.plot_y, "y column")->required();
  plot->add_option("--series", st.plot_series, "series column");
  plot->add_flag("--logx", st.plot_logx, "log-scale x");
  plot->add_flag("--logy", st.plot_logy, "log-scale y");
  plot->add_option("--title", st.plot_title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(dataset)) {
      if (dataset->got_subcommand(gen_hard)) return cmd_gen_hard(st);
      if (dataset->got_subcommand(gen_planted)) return cmd_gen_planted(st);
      if (dataset->got_subcommand(margin_cmd)) return cmd_margin(st);
      throw std::invalid_argument("dataset requires a subcommand");
    }
    if (app.got_subcommand(run)) return cmd_run(st);
    if (app.got_subcommand(bounds_cmd)) {
      if (bounds_cmd->got_subcommand(sweep)) return cmd_bounds_sweep(st);
      throw std::invalid_argument("bounds requires a subcommand");
    }
    if (app.got_subcommand(experiment)) {
      for (const auto& [k, v] : exp_opts) {
        if (!v.empty()) st.experiment_params[k] = v;
      }
      return cmd_experiment(st);
    }
    if (app.got_subcommand(plot)) return cmd_plot(st);
    throw std::invalid_argument("no subcommand given");
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
