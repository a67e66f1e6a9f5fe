#include "qperc/grover.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qperc/bounds.hpp"

namespace qperc {

double NoiseModel::checked(double p) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("noise probability must be in [0,1]");
  }
  return p;
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::bit_flip: return "bit_flip";
    case NoiseKind::depolarizing: return "depolarizing";
  }
  return "?";
}

std::string backend_name(GroverBackend backend) {
  return backend == GroverBackend::analytic ? "analytic" : "statevector";
}

std::int64_t GroverInstance::marked_count() const {
  if (marked_count_hint) return *marked_count_hint;
  std::int64_t c = 0;
  for (std::int64_t i = 0; i < n_items; ++i) {
    if (marked(i)) ++c;
  }
  return c;
}

double theta_from_fraction(double a) {
  if (!(a >= 0.0) || !(a <= 1.0)) throw std::invalid_argument("fraction must be in [0,1]");
  return std::asin(std::sqrt(a));
}

double success_probability(double theta, std::int64_t j) {
  if (!(theta >= 0.0) || !(theta <= M_PI / 2)) {
    throw std::invalid_argument("theta must be in [0, pi/2]");
  }
  const double s = std::sin(static_cast<double>(2 * j + 1) * theta);
  return s * s;
}

double avg_success_probability(double theta, std::int64_t m_range) {
  if (!(theta > 0.0) || !(theta < M_PI / 2)) {
    throw std::invalid_argument("avg_success_probability requires 0 < theta < pi/2");
  }
  if (m_range < 1) throw std::invalid_argument("m_range must be >= 1");
  const double m = static_cast<double>(m_range);
  return 0.5 * (1.0 - std::sin(4.0 * m * theta) / (2.0 * m * std::sin(2.0 * theta)));
}

double noisy_success_probability(double theta, std::int64_t j, const NoiseModel& noise,
                                 double marked_fraction) {
  const double clean = success_probability(theta, j);
  if (noise.kind == NoiseKind::none || noise.p == 0.0) return clean;
  if (noise.kind != NoiseKind::depolarizing) {
    throw std::invalid_argument(
        "bit-flip noise is not expressible in the rotation picture; use the "
        "statevector backend");
  }
  const double survive = std::pow(1.0 - noise.p, static_cast<double>(j));
  return survive * clean + (1.0 - survive) * marked_fraction;
}

namespace {

// Uniform choice among marked (want_marked) or unmarked indices.
std::int64_t pick_with_predicate(const GroverInstance& inst, bool want_marked,
                                 std::int64_t count_with, Rng& rng) {
  const std::int64_t pool = want_marked ? count_with : inst.n_items - count_with;
  std::int64_t k = rng.uniform_below(pool);
  for (std::int64_t i = 0; i < inst.n_items; ++i) {
    if (inst.marked(i) == want_marked) {
      if (k == 0) return i;
      --k;
    }
  }
  throw std::logic_error("marked_count_hint inconsistent with predicate");
}

int qubits_for(std::int64_t n_items) {
  if (n_items < 1 || (n_items & (n_items - 1)) != 0) {
    throw std::invalid_argument("statevector backend requires a power-of-two size");
  }
  int q = 0;
  while ((std::int64_t{1} << q) < n_items) ++q;
  if (q > 20) throw std::invalid_argument("statevector backend limited to 2^20 items");
  return q;
}

std::vector<std::uint8_t> marked_mask(const GroverInstance& inst) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(inst.n_items), 0);
  for (std::int64_t i = 0; i < inst.n_items; ++i) {
    mask[static_cast<std::size_t>(i)] = inst.marked(i) ? 1 : 0;
  }
  return mask;
}

}  // namespace

std::int64_t analytic_grover_sample(const GroverInstance& inst, std::int64_t j,
                                    const NoiseModel& noise, Rng& rng) {
  if (inst.n_items < 1) throw std::invalid_argument("empty search space");
  if (noise.kind == NoiseKind::bit_flip) {
    throw std::invalid_argument(
        "bit-flip noise is not expressible in the rotation picture; use the "
        "statevector backend");
  }
  const std::int64_t count = inst.marked_count();
  if (count == 0) return pick_with_predicate(inst, false, 0, rng);
  if (count == inst.n_items) return pick_with_predicate(inst, true, count, rng);
  const double a = static_cast<double>(count) / static_cast<double>(inst.n_items);
  const double p_marked = noisy_success_probability(theta_from_fraction(a), j, noise, a);
  const bool hit = rng.uniform() < p_marked;
  return pick_with_predicate(inst, hit, count, rng);
}

std::int64_t statevector_grover_sample(const GroverInstance& inst, std::int64_t j,
                                       const NoiseModel& noise, Rng& rng,
                                       KernelPolicy policy) {
  const int q = qubits_for(inst.n_items);
  const std::vector<std::uint8_t> mask = marked_mask(inst);
  StatevectorSim sim(q, policy);
  for (std::int64_t it = 0; it < j; ++it) {
    sim.grover_iteration(mask);
    switch (noise.kind) {
      case NoiseKind::none: break;
      case NoiseKind::bit_flip: sim.apply_bit_flip_channel(noise.p, rng); break;
      case NoiseKind::depolarizing: sim.apply_depolarizing_channel(noise.p, rng); break;
    }
  }
  return sim.sample_index(rng);
}

double statevector_marked_probability(const GroverInstance& inst, std::int64_t j,
                                      KernelPolicy policy) {
  const int q = qubits_for(inst.n_items);
  const std::vector<std::uint8_t> mask = marked_mask(inst);
  StatevectorSim sim(q, policy);
  for (std::int64_t it = 0; it < j; ++it) sim.grover_iteration(mask);
  return sim.masked_probability(mask);
}

QSearchOutcome qsearch(const GroverInstance& inst, GroverBackend backend,
                       const NoiseModel& noise, Rng& rng) {
  if (inst.n_items < 1) throw std::invalid_argument("empty search space");
  if (inst.n_items == 1) return {0, 0, false};
  const std::int64_t m_range = bounds::schedule_bound(inst.n_items);
  const std::int64_t m = rng.uniform_below(m_range);
  const std::int64_t index = backend == GroverBackend::analytic
                                 ? analytic_grover_sample(inst, m, noise, rng)
                                 : statevector_grover_sample(inst, m, noise, rng);
  return {index, m, false};
}

std::vector<PofMPoint> p_of_m_curve(const GroverInstance& inst, GroverBackend backend,
                                    const NoiseModel& noise, std::int64_t m_max,
                                    std::int64_t trials_per_point, Rng& rng) {
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  if (trials_per_point < 1) throw std::invalid_argument("trials_per_point must be >= 1");
  const bool closed_form = backend == GroverBackend::analytic &&
                           noise.kind != NoiseKind::bit_flip;

  std::vector<PofMPoint> rows;
  rows.reserve(static_cast<std::size_t>(m_max));

  if (closed_form) {
    const std::int64_t count = inst.marked_count();
    const double a = static_cast<double>(count) / static_cast<double>(inst.n_items);
    const double theta = theta_from_fraction(a);
    for (std::int64_t m_range = 1; m_range <= m_max; ++m_range) {
      double p = 0.0;
      if (count == inst.n_items) {
        p = 1.0;
      } else if (count > 0) {
        for (std::int64_t j = 0; j < m_range; ++j) {
          p += noisy_success_probability(theta, j, noise, a);
        }
        p /= static_cast<double>(m_range);
      }
      rows.push_back({m_range, p, 0.0});
    }
    return rows;
  }

  for (std::int64_t m_range = 1; m_range <= m_max; ++m_range) {
    const Rng point_rng = rng.fork(static_cast<std::uint64_t>(m_range));
    std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : hits)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials_per_point); ++t) {
      Rng trial_rng = point_rng.fork(static_cast<std::uint64_t>(t));
      const std::int64_t m = trial_rng.uniform_below(m_range);
      const std::int64_t idx =
          backend == GroverBackend::analytic
              ? analytic_grover_sample(inst, m, noise, trial_rng)
              : statevector_grover_sample(inst, m, noise, trial_rng,
                                          KernelPolicy::serial);
      if (inst.marked(idx)) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials_per_point);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials_per_point));
    rows.push_back({m_range, p, se});
  }
  return rows;
}

std::string p_of_m_csv(const std::vector<PofMPoint>& rows, const GroverInstance& inst,
                       GroverBackend backend, const NoiseModel& noise,
                       std::uint64_t seed) {
  std::ostringstream out;
  out << "M,p_estimate,stderr,backend,noise_kind,noise_p,n_items,marked_count,seed\n";
  char buf[64];
  for (const PofMPoint& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g", r.p_estimate, r.std_error);
    out << r.m_range << "," << buf << "," << backend_name(backend) << ","
        << noise_kind_name(noise.kind) << "," << noise.p << "," << inst.n_items << ","
        << inst.marked_count() << "," << seed << "\n";
  }
  return out.str();
}

}  // namespace qperc
