#include "qperc/perceptron.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qperc/bounds.hpp"

namespace qperc {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::classical_online: return "classical_online";
    case Algorithm::online_quantum: return "online_quantum";
    case Algorithm::version_space_quantum: return "version_space_quantum";
    case Algorithm::hybrid_quantum: return "hybrid_quantum";
  }
  return "?";
}

bool verify_separator(const Hyperplane& w, const LabeledDataset& ds, CostLedger* ledger) {
  if (w.w.size() != ds.dim) throw std::invalid_argument("dimension mismatch");
  if (ledger) {
    const std::int64_t n = static_cast<std::int64_t>(ds.size());
    ledger->oracle_queries += n;
    ledger->wall_steps += n;
  }
  for (const LabeledPoint& p : ds.points) {
    if (!(p.y * dot(w.w, p.x) > 0.0)) return false;
  }
  return true;
}

namespace {

// Maintains s_i = y_i <w, x_i> for an evolving w. Perceptron updates touch
// w by z_m = y_m x_m, so scores move by one Gram row; rows are cached
// lazily. This is simulator bookkeeping, not charged work.
class ScoreTable {
 public:
  explicit ScoreTable(const LabeledDataset& ds) : ds_(ds), z_(ds.size()), rows_(ds.size()) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      z_[i] = ds.points[i].x;
      if (ds.points[i].y < 0) {
        for (double& v : z_[i]) v = -v;
      }
    }
    scores_.assign(ds.size(), 0.0);
  }

  void reset_zero() {
    std::fill(scores_.begin(), scores_.end(), 0.0);
    w_.assign(ds_.dim, 0.0);
  }

  void reset_to(const Hyperplane& h) {
    if (h.w.size() != ds_.dim) throw std::invalid_argument("dimension mismatch");
    w_ = h.w;
    for (std::size_t i = 0; i < z_.size(); ++i) scores_[i] = dot(w_, z_[i]);
  }

  void apply_point_update(std::int64_t m) {
    const std::vector<double>& zm = z_[static_cast<std::size_t>(m)];
    for (std::size_t c = 0; c < ds_.dim; ++c) w_[c] += zm[c];
    const std::vector<double>& g = gram_row(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < scores_.size(); ++i) scores_[i] += g[i];
  }

  bool misclassified(std::int64_t i) const {
    return scores_[static_cast<std::size_t>(i)] <= 0.0;
  }

  std::int64_t misclassified_count() const {
    std::int64_t c = 0;
    for (double s : scores_) {
      if (s <= 0.0) ++c;
    }
    return c;
  }

  const std::vector<double>& weights() const { return w_; }

 private:
  const std::vector<double>& gram_row(std::size_t m) {
    std::vector<double>& r = rows_[m];
    if (r.empty()) {
      r.resize(z_.size());
      for (std::size_t j = 0; j < z_.size(); ++j) r[j] = dot(z_[m], z_[j]);
    }
    return r;
  }

  const LabeledDataset& ds_;
  std::vector<std::vector<double>> z_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> scores_;
  std::vector<double> w_;
};

std::int64_t next_pow2(std::int64_t n) {
  std::int64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Search space over the training points with oracle "misclassified by the
// current w". The statevector backend needs a power-of-two size, so the
// space is padded with never-marked dummy indices and theta_a follows the
// padded size.
GroverInstance point_instance(const ScoreTable& st, std::int64_t n, GroverBackend backend) {
  GroverInstance inst;
  inst.n_items = backend == GroverBackend::statevector ? next_pow2(n) : n;
  inst.marked = [&st, n](std::int64_t i) { return i < n && st.misclassified(i); };
  inst.marked_count_hint = st.misclassified_count();
  return inst;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
}

}  // namespace

RunResult classical_online(const LabeledDataset& ds, ClassicalProtocol protocol,
                           std::optional<double> gamma, std::int64_t examination_cap) {
  if (ds.points.empty()) throw std::invalid_argument("empty dataset");
  std::optional<std::int64_t> update_cap;
  if (gamma) {
    if (!(*gamma > 0.0) || !(*gamma <= 1.0)) {
      throw std::invalid_argument("gamma must be in (0,1]");
    }
    update_cap = bounds::novikoff_bound(*gamma) + 1;
  }

  RunResult res;
  res.algorithm = Algorithm::classical_online;
  std::vector<double> w(ds.dim, 0.0);
  const std::size_t n = ds.size();

  bool clean = false;
  while (!clean) {
    clean = true;
    bool updated_this_pass = false;
    for (std::size_t i = 0; i < n; ++i) {
      res.ledger.wall_steps += 1;
      res.ledger.oracle_queries += 1;
      if (res.ledger.wall_steps > examination_cap) {
        throw std::runtime_error("classical perceptron exceeded its examination cap");
      }
      const LabeledPoint& p = ds.points[i];
      if (p.y * dot(w, p.x) <= 0.0) {
        clean = false;
        const bool apply = protocol == ClassicalProtocol::stream_until_clean ||
                           !updated_this_pass;
        if (apply) {
          for (std::size_t c = 0; c < ds.dim; ++c) w[c] += p.y * p.x[c];
          res.ledger.updates += 1;
          updated_this_pass = true;
          if (update_cap && res.ledger.updates > *update_cap) {
            throw std::runtime_error("classical perceptron exceeded the Novikoff update cap");
          }
        }
      }
    }
  }
  res.hyperplane.w = std::move(w);
  res.separates = true;  // terminated via a clean pass
  return res;
}

RunResult online_quantum(const LabeledDataset& ds, double gamma, double epsilon,
                         GroverBackend backend, const NoiseModel& noise,
                         std::uint64_t seed) {
  if (ds.points.empty()) throw std::invalid_argument("empty dataset");
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
  check_epsilon(epsilon);

  Rng rng(seed);
  RunResult res;
  res.algorithm = Algorithm::online_quantum;
  res.seed = seed;

  const std::int64_t n = static_cast<std::int64_t>(ds.size());
  const std::int64_t outer = bounds::novikoff_bound(gamma);
  const std::int64_t inner =
      static_cast<std::int64_t>(std::ceil(bounds::log34(gamma * gamma * epsilon)));

  ScoreTable st(ds);
  st.reset_zero();
  for (std::int64_t round = 0; round < outer; ++round) {
    if (st.misclassified_count() == 0) break;
    for (std::int64_t attempt = 0; attempt < inner; ++attempt) {
      const GroverInstance inst = point_instance(st, n, backend);
      const QSearchOutcome out = qsearch(inst, backend, noise, rng);
      res.ledger.oracle_queries += out.iterations_used;
      res.ledger.wall_steps += out.iterations_used;
      res.ledger.classical_verifications += 1;
      res.ledger.wall_steps += 1;
      if (out.index < n && st.misclassified(out.index)) {
        st.apply_point_update(out.index);
        res.ledger.updates += 1;
      }
    }
  }
  res.hyperplane.w = st.weights();
  res.separates = st.misclassified_count() == 0;
  return res;
}

RunResult version_space_quantum(const LabeledDataset& ds,
                                const std::vector<Hyperplane>& hyperplanes, double epsilon,
                                GroverBackend backend, const NoiseModel& noise,
                                std::uint64_t seed) {
  if (hyperplanes.empty()) throw std::invalid_argument("need at least one hyperplane");
  check_epsilon(epsilon);
  const std::int64_t n = static_cast<std::int64_t>(ds.size());
  const std::int64_t k = static_cast<std::int64_t>(hyperplanes.size());

  // Truth table of the in-version-space oracle; what the quantum device
  // would evaluate in superposition, at N charged units per iteration.
  std::vector<std::uint8_t> separating(static_cast<std::size_t>(k), 0);
  std::int64_t sep_count = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    separating[static_cast<std::size_t>(i)] =
        verify_separator(hyperplanes[static_cast<std::size_t>(i)], ds) ? 1 : 0;
    sep_count += separating[static_cast<std::size_t>(i)];
  }

  Rng rng(seed);
  RunResult res;
  res.algorithm = Algorithm::version_space_quantum;
  res.seed = seed;

  GroverInstance inst;
  inst.n_items = backend == GroverBackend::statevector ? next_pow2(k) : k;
  inst.marked = [&separating, k](std::int64_t i) {
    return i < k && separating[static_cast<std::size_t>(i)] != 0;
  };
  inst.marked_count_hint = sep_count;

  const std::int64_t attempts = static_cast<std::int64_t>(std::ceil(bounds::log34(epsilon)));
  for (std::int64_t t = 0; t < attempts; ++t) {
    const QSearchOutcome out = qsearch(inst, backend, noise, rng);
    res.ledger.oracle_queries += out.iterations_used * n;
    res.ledger.wall_steps += out.iterations_used * n;
    res.ledger.classical_verifications += n;
    res.ledger.wall_steps += n;
    if (out.index < k && separating[static_cast<std::size_t>(out.index)]) {
      res.hyperplane = hyperplanes[static_cast<std::size_t>(out.index)];
      res.separates = true;
      return res;
    }
  }
  res.hyperplane = hyperplanes.front();
  res.separates = separating.front() != 0;
  return res;
}

RunResult hybrid_quantum(const LabeledDataset& ds,
                         const std::vector<Hyperplane>& hyperplanes, double epsilon,
                         GroverBackend backend, const NoiseModel& noise,
                         std::uint64_t seed) {
  if (hyperplanes.empty()) throw std::invalid_argument("need at least one hyperplane");
  check_epsilon(epsilon);
  const std::int64_t n = static_cast<std::int64_t>(ds.size());
  const std::int64_t k = static_cast<std::int64_t>(hyperplanes.size());
  const std::int64_t k2 = bounds::amplification_rounds(k, epsilon);

  Rng rng(seed);
  RunResult res;
  res.algorithm = Algorithm::hybrid_quantum;
  res.seed = seed;

  ScoreTable st(ds);
  for (std::int64_t i = 0; i < k; ++i) {
    st.reset_to(hyperplanes[static_cast<std::size_t>(i)]);
    bool witness_found = false;
    for (std::int64_t attempt = 0; attempt < k2 && !witness_found; ++attempt) {
      const GroverInstance inst = point_instance(st, n, backend);
      const QSearchOutcome out = qsearch(inst, backend, noise, rng);
      res.ledger.oracle_queries += out.iterations_used;
      res.ledger.wall_steps += out.iterations_used;
      res.ledger.classical_verifications += 1;
      res.ledger.wall_steps += 1;
      if (out.index < n && st.misclassified(out.index)) witness_found = true;
    }
    if (!witness_found) {
      res.hyperplane = hyperplanes[static_cast<std::size_t>(i)];
      res.separates = st.misclassified_count() == 0;
      return res;
    }
    res.ledger.updates += 1;  // hyperplane rejected, switch to the next
  }
  res.hyperplane = hyperplanes.front();
  res.separates = verify_separator(hyperplanes.front(), ds);
  return res;
}

std::string run_result_csv_header() {
  return "algorithm,dataset,n,gamma,epsilon,backend,noise_kind,noise_p,seed,separates,"
         "updates,oracle_queries,classical_verifications,wall_steps";
}

std::string run_result_csv_row(const RunResult& result, const RunContext& ctx) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g,%.12g", ctx.gamma, ctx.epsilon);
  out << algorithm_name(result.algorithm) << "," << ctx.dataset << "," << ctx.n << ","
      << buf << "," << (ctx.backend ? backend_name(*ctx.backend) : "none") << ","
      << noise_kind_name(ctx.noise.kind) << "," << ctx.noise.p << "," << result.seed << ","
      << (result.separates ? 1 : 0) << "," << result.ledger.updates << ","
      << result.ledger.oracle_queries << "," << result.ledger.classical_verifications << ","
      << result.ledger.wall_steps;
  return out.str();
}

}  // namespace qperc
