#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qperc/rng.hpp"
#include "qperc/statevector.hpp"

namespace qperc {

enum class NoiseKind { none, bit_flip, depolarizing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double p = 0.0;  // per-iteration error probability, ignored for kind none

  static NoiseModel none() { return {NoiseKind::none, 0.0}; }
  static NoiseModel bit_flip(double p) { return {NoiseKind::bit_flip, checked(p)}; }
  static NoiseModel depolarizing(double p) { return {NoiseKind::depolarizing, checked(p)}; }

 private:
  static double checked(double p);
};

std::string noise_kind_name(NoiseKind kind);

enum class GroverBackend { analytic, statevector };
std::string backend_name(GroverBackend backend);

// Search space {0, ..., n_items-1} with a marked-set predicate. The
// statevector backend additionally requires n_items to be a power of two.
struct GroverInstance {
  std::int64_t n_items = 0;
  std::function<bool(std::int64_t)> marked;
  std::optional<std::int64_t> marked_count_hint;

  std::int64_t marked_count() const;
};

struct QSearchOutcome {
  std::int64_t index = 0;
  std::int64_t iterations_used = 0;
  bool was_marked = false;  // filled by the caller after classical verification
};

// theta_a = asin(sqrt(a)) for a marked fraction a in [0, 1].
double theta_from_fraction(double a);

// Probability of measuring a marked item after j Grover iterations,
// sin^2((2j+1) theta).
double success_probability(double theta, std::int64_t j);

// Mean of success_probability over j in {0..M-1}, closed form
// (1/2)(1 - sin(4 M theta) / (2 M sin(2 theta))). Requires 0 < theta < pi/2.
double avg_success_probability(double theta, std::int64_t m_range);

// Success probability after j iterations under per-iteration noise on the
// rotation picture: (1-p)^j sin^2((2j+1)theta) + (1-(1-p)^j) a for the
// depolarizing channel; p = 0 (or kind none) reduces to the exact formula.
double noisy_success_probability(double theta, std::int64_t j, const NoiseModel& noise,
                                 double marked_fraction);

// One measurement after j iterations, exact rotation picture (any N).
// Supports noise none and depolarizing; bit flip needs the statevector.
std::int64_t analytic_grover_sample(const GroverInstance& inst, std::int64_t j,
                                    const NoiseModel& noise, Rng& rng);

// One measurement after j noisy iterations of a 2^q statevector trajectory.
std::int64_t statevector_grover_sample(const GroverInstance& inst, std::int64_t j,
                                       const NoiseModel& noise, Rng& rng,
                                       KernelPolicy policy = KernelPolicy::parallel);

// Exact probability (no sampling) that measuring the noise-free statevector
// after j iterations yields a marked index.
double statevector_marked_probability(const GroverInstance& inst, std::int64_t j,
                                      KernelPolicy policy = KernelPolicy::parallel);

// Grover search with the iteration count drawn uniformly from
// {0..schedule_bound(N)-1}; finds a marked item with probability >= 1/4
// whenever the marked set is non-empty. N = 1 falls back to the classical
// answer. Markedness of the returned index is NOT verified here.
QSearchOutcome qsearch(const GroverInstance& inst, GroverBackend backend,
                       const NoiseModel& noise, Rng& rng);

struct PofMPoint {
  std::int64_t m_range = 0;
  double p_estimate = 0.0;
  double std_error = 0.0;  // 0 for closed-form points
};

// QSearch success probability as a function of the draw range M = 1..m_max:
// closed form where the backend/noise pair permits, Monte Carlo over
// trials_per_point trajectories otherwise.
std::vector<PofMPoint> p_of_m_curve(const GroverInstance& inst, GroverBackend backend,
                                    const NoiseModel& noise, std::int64_t m_max,
                                    std::int64_t trials_per_point, Rng& rng);

// CSV with header M,p_estimate,stderr,backend,noise_kind,noise_p,n_items,marked_count,seed.
std::string p_of_m_csv(const std::vector<PofMPoint>& rows, const GroverInstance& inst,
                       GroverBackend backend, const NoiseModel& noise, std::uint64_t seed);

}  // namespace qperc
