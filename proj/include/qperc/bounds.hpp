#pragma once

#include <cstdint>

namespace qperc::bounds {

// log base 3/4 of x, for x in (0, 1). Both logs are negative, so the
// result is positive.
double log34(double x);

// Novikoff update cap ceil(1/gamma^2); also the outer round count of the
// online quantum perceptron. Requires 0 < gamma <= 1.
std::int64_t novikoff_bound(double gamma);

// Number of Gaussian hyperplanes K = ceil(ln(eps/2) / ln(1 - sqrt(2)gamma/sqrt(pi))).
// Accepts epsilon in (0, 2) so the degenerate K = 1 boundary is expressible;
// the complexity calculators below validate epsilon in (0, 1) themselves.
std::int64_t num_hyperplanes(double gamma, double epsilon);

// Per-hyperplane QSearch repetitions
// K2 = ceil(log_{3/4}(1 - (1 - eps/2)^{1/(K-1)})), with the K = 1 fallback
// K2 = ceil(log_{3/4}(eps/2)).
std::int64_t amplification_rounds(std::int64_t k, double epsilon);

// Uniform draw range M = ceil(1 / sin(2 asin(sqrt(1/N)))) used by QSearch.
// Requires n_items >= 2 (N = 1 is handled classically by callers).
std::int64_t schedule_bound(std::int64_t n_items);

// Constant-explicit worst-case operation counts assembled from the
// algorithms' literal loop bounds. These are the curves of the complexity
// plots and the oracles for the ledger tests.
std::int64_t online_q_bound(std::int64_t n, double gamma, double epsilon);
std::int64_t version_space_bound(std::int64_t n, double gamma, double epsilon);
std::int64_t hybrid_bound(std::int64_t n, double gamma, double epsilon);

// Probability that a standard Gaussian hyperplane separates a margin-gamma
// sample: exact upper bound erf(gamma/sqrt(2)) and its first-order form
// sqrt(2/pi)*gamma.
struct SeparationProbability {
  double erf_bound;
  double first_order;
};
SeparationProbability gaussian_separation_probability(double gamma);

// Expected-risk bound ln(1/eps) / (n+1) / gamma, evaluated pointwise with
// the sample's own margin.
double generalization_bound(std::int64_t n, double gamma, double epsilon);

}  // namespace qperc::bounds
