#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qperc/rng.hpp"

namespace qperc {

using Amplitude = std::complex<double>;

// Raw statevector kernels. Two implementations with identical contracts:
// sv_serial is the reference, sv_omp parallelizes the element-wise passes
// with OpenMP. The diffusion mean uses a fixed chunked reduction in both,
// so results do not depend on the thread count.
namespace sv_serial {
void oracle_flip(std::vector<Amplitude>& amp, const std::vector<std::uint8_t>& marked);
void diffusion(std::vector<Amplitude>& amp);
void bit_flip(std::vector<Amplitude>& amp, int qubit);
double norm_sq(const std::vector<Amplitude>& amp);
double masked_probability(const std::vector<Amplitude>& amp,
                          const std::vector<std::uint8_t>& marked);
}  // namespace sv_serial

namespace sv_omp {
void oracle_flip(std::vector<Amplitude>& amp, const std::vector<std::uint8_t>& marked);
void diffusion(std::vector<Amplitude>& amp);
void bit_flip(std::vector<Amplitude>& amp, int qubit);
double norm_sq(const std::vector<Amplitude>& amp);
double masked_probability(const std::vector<Amplitude>& amp,
                          const std::vector<std::uint8_t>& marked);
}  // namespace sv_omp

enum class KernelPolicy { serial, parallel };

// 2^q amplitudes, q <= 20. Owns the state of one trajectory; the noise
// channels are stochastic events drawn from the caller's Rng, so a fixed
// seed fixes the trajectory.
class StatevectorSim {
 public:
  explicit StatevectorSim(int qubits, KernelPolicy policy = KernelPolicy::parallel);

  int qubits() const { return q_; }
  std::int64_t size() const { return static_cast<std::int64_t>(amp_.size()); }
  const std::vector<Amplitude>& amplitudes() const { return amp_; }

  void reset_uniform();
  void apply_oracle(const std::vector<std::uint8_t>& marked);  // R: sign flip on marked
  void apply_diffusion();                                      // G: 2|psi0><psi0| - I
  void apply_bit_flip(int qubit);                              // X on one qubit
  void collapse_to_basis(std::int64_t index);

  // One noisy Grover iteration: G.R followed by the channel's trajectory
  // event(s). Bit flip: each qubit flips independently with probability p.
  // Depolarizing: with probability p the state is replaced by a uniformly
  // random computational basis state.
  void grover_iteration(const std::vector<std::uint8_t>& marked);
  void apply_bit_flip_channel(double p, Rng& rng);
  void apply_depolarizing_channel(double p, Rng& rng);

  double norm_sq() const;
  double masked_probability(const std::vector<std::uint8_t>& marked) const;
  std::int64_t sample_index(Rng& rng) const;

 private:
  int q_;
  KernelPolicy policy_;
  std::vector<Amplitude> amp_;
};

}  // namespace qperc
