#include "qperc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qperc {

namespace {

// Chunked sum with a fixed chunk grid: the combine order is independent of
// the number of threads, so serial and parallel runs of the same build give
// identical results run-to-run.
constexpr std::size_t kChunks = 64;

template <typename F>
Amplitude chunked_sum(std::size_t n, F&& partial) {
  Amplitude total{0.0, 0.0};
  Amplitude part[kChunks];
  const std::size_t chunk = (n + kChunks - 1) / kChunks;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kChunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    part[c] = partial(lo, hi);
  }
  for (std::size_t c = 0; c < kChunks; ++c) total += part[c];
  return total;
}

}  // namespace

namespace sv_serial {

void oracle_flip(std::vector<Amplitude>& amp, const std::vector<std::uint8_t>& marked) {
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (marked[i]) amp[i] = -amp[i];
  }
}

void diffusion(std::vector<Amplitude>& amp) {
  Amplitude sum{0.0, 0.0};
  for (const Amplitude& a : amp) sum += a;
  const Amplitude two_mean = 2.0 * sum / static_cast<double>(amp.size());
  for (Amplitude& a : amp) a = two_mean - a;
}

void bit_flip(std::vector<Amplitude>& amp, int qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const std::size_t j = i ^ mask;
    if (i < j) std::swap(amp[i], amp[j]);
  }
}

double norm_sq(const std::vector<Amplitude>& amp) {
  double s = 0.0;
  for (const Amplitude& a : amp) s += std::norm(a);
  return s;
}

double masked_probability(const std::vector<Amplitude>& amp,
                          const std::vector<std::uint8_t>& marked) {
  double s = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (marked[i]) s += std::norm(amp[i]);
  }
  return s;
}

}  // namespace sv_serial

namespace sv_omp {

void oracle_flip(std::vector<Amplitude>& amp, const std::vector<std::uint8_t>& marked) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(amp.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (marked[static_cast<std::size_t>(i)]) amp[static_cast<std::size_t>(i)] =
        -amp[static_cast<std::size_t>(i)];
  }
}

void diffusion(std::vector<Amplitude>& amp) {
  const std::size_t n = amp.size();
  const Amplitude sum = chunked_sum(n, [&](std::size_t lo, std::size_t hi) {
    Amplitude s{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) s += amp[i];
    return s;
  });
  const Amplitude two_mean = 2.0 * sum / static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    amp[static_cast<std::size_t>(i)] = two_mean - amp[static_cast<std::size_t>(i)];
  }
}

void bit_flip(std::vector<Amplitude>& amp, int qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(amp.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const std::size_t j = u ^ mask;
    if (u < j) std::swap(amp[u], amp[j]);
  }
}

double norm_sq(const std::vector<Amplitude>& amp) {
  return chunked_sum(amp.size(),
                     [&](std::size_t lo, std::size_t hi) {
                       double s = 0.0;
                       for (std::size_t i = lo; i < hi; ++i) s += std::norm(amp[i]);
                       return Amplitude{s, 0.0};
                     })
      .real();
}

double masked_probability(const std::vector<Amplitude>& amp,
                          const std::vector<std::uint8_t>& marked) {
  return chunked_sum(amp.size(),
                     [&](std::size_t lo, std::size_t hi) {
                       double s = 0.0;
                       for (std::size_t i = lo; i < hi; ++i) {
                         if (marked[i]) s += std::norm(amp[i]);
                       }
                       return Amplitude{s, 0.0};
                     })
      .real();
}

}  // namespace sv_omp

StatevectorSim::StatevectorSim(int qubits, KernelPolicy policy)
    : q_(qubits), policy_(policy) {
  if (qubits < 0 || qubits > 20) {
    throw std::invalid_argument("statevector backend supports 0 <= q <= 20 qubits");
  }
  amp_.assign(std::size_t{1} << qubits, Amplitude{0.0, 0.0});
  reset_uniform();
}

void StatevectorSim::reset_uniform() {
  const double a = 1.0 / std::sqrt(static_cast<double>(amp_.size()));
  std::fill(amp_.begin(), amp_.end(), Amplitude{a, 0.0});
}

void StatevectorSim::apply_oracle(const std::vector<std::uint8_t>& marked) {
  policy_ == KernelPolicy::serial ? sv_serial::oracle_flip(amp_, marked)
                                  : sv_omp::oracle_flip(amp_, marked);
}

void StatevectorSim::apply_diffusion() {
  policy_ == KernelPolicy::serial ? sv_serial::diffusion(amp_) : sv_omp::diffusion(amp_);
}

void StatevectorSim::apply_bit_flip(int qubit) {
  if (qubit < 0 || qubit >= q_) throw std::invalid_argument("bad qubit index");
  policy_ == KernelPolicy::serial ? sv_serial::bit_flip(amp_, qubit)
                                  : sv_omp::bit_flip(amp_, qubit);
}

void StatevectorSim::collapse_to_basis(std::int64_t index) {
  std::fill(amp_.begin(), amp_.end(), Amplitude{0.0, 0.0});
  amp_[static_cast<std::size_t>(index)] = Amplitude{1.0, 0.0};
}

void StatevectorSim::grover_iteration(const std::vector<std::uint8_t>& marked) {
  apply_oracle(marked);
  apply_diffusion();
}

void StatevectorSim::apply_bit_flip_channel(double p, Rng& rng) {
  for (int b = 0; b < q_; ++b) {
    if (rng.uniform() < p) apply_bit_flip(b);
  }
}

void StatevectorSim::apply_depolarizing_channel(double p, Rng& rng) {
  if (rng.uniform() < p) collapse_to_basis(rng.uniform_below(size()));
}

double StatevectorSim::norm_sq() const {
  return policy_ == KernelPolicy::serial ? sv_serial::norm_sq(amp_)
                                         : sv_omp::norm_sq(amp_);
}

double StatevectorSim::masked_probability(const std::vector<std::uint8_t>& marked) const {
  return policy_ == KernelPolicy::serial ? sv_serial::masked_probability(amp_, marked)
                                         : sv_omp::masked_probability(amp_, marked);
}

std::int64_t StatevectorSim::sample_index(Rng& rng) const {
  const double u = rng.uniform() * norm_sq();
  double acc = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    acc += std::norm(amp_[i]);
    if (u < acc) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(amp_.size()) - 1;
}

}  // namespace qperc
