#include "qperc/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace qperc::bounds {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in (0,1)");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
}

constexpr double kLn34 = -0.2876820724517809274392190059938;  // ln(3/4)

}  // namespace

double log34(double x) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw std::invalid_argument("log34 requires x in (0,1)");
  }
  return std::log(x) / kLn34;
}

std::int64_t novikoff_bound(double gamma) {
  if (!(gamma > 0.0) || !(gamma <= 1.0)) {
    throw std::invalid_argument("gamma must be in (0,1]");
  }
  return static_cast<std::int64_t>(std::ceil(1.0 / (gamma * gamma)));
}

std::int64_t num_hyperplanes(double gamma, double epsilon) {
  check_gamma(gamma);
  if (!(epsilon > 0.0) || !(epsilon < 2.0)) {
    throw std::invalid_argument("epsilon must be in (0,2) for num_hyperplanes");
  }
  const double c = std::sqrt(2.0) * gamma / std::sqrt(M_PI);
  if (!(c < 1.0)) {
    throw std::invalid_argument("gamma*sqrt(2/pi) must be < 1");
  }
  // Same log on both sides so the K = 1 boundary (eps/2 == 1-c) is exact.
  const double k = std::log(epsilon / 2.0) / std::log(1.0 - c);
  return static_cast<std::int64_t>(std::ceil(k));
}

std::int64_t amplification_rounds(std::int64_t k, double epsilon) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  check_epsilon(epsilon);
  if (k == 1) {
    return static_cast<std::int64_t>(std::ceil(log34(epsilon / 2.0)));
  }
  const double base = 1.0 - epsilon / 2.0;
  const double miss = -std::expm1(std::log(base) / static_cast<double>(k - 1));
  return static_cast<std::int64_t>(std::ceil(log34(miss)));
}

std::int64_t schedule_bound(std::int64_t n_items) {
  if (n_items < 2) {
    throw std::invalid_argument("schedule_bound requires n_items >= 2");
  }
  const double theta = std::asin(std::sqrt(1.0 / static_cast<double>(n_items)));
  return static_cast<std::int64_t>(std::ceil(1.0 / std::sin(2.0 * theta)));
}

std::int64_t online_q_bound(std::int64_t n, double gamma, double epsilon) {
  check_gamma(gamma);
  check_epsilon(epsilon);
  const std::int64_t outer = novikoff_bound(gamma);
  const std::int64_t inner =
      static_cast<std::int64_t>(std::ceil(log34(gamma * gamma * epsilon)));
  return outer * inner * schedule_bound(n);
}

std::int64_t version_space_bound(std::int64_t n, double gamma, double epsilon) {
  check_gamma(gamma);
  check_epsilon(epsilon);
  const std::int64_t attempts = static_cast<std::int64_t>(std::ceil(log34(epsilon)));
  const std::int64_t k = num_hyperplanes(gamma, epsilon);
  const std::int64_t per_search = k >= 2 ? schedule_bound(k) : 1;
  return attempts * per_search * n;
}

std::int64_t hybrid_bound(std::int64_t n, double gamma, double epsilon) {
  check_gamma(gamma);
  check_epsilon(epsilon);
  const std::int64_t k = num_hyperplanes(gamma, epsilon);
  return k * amplification_rounds(k, epsilon) * schedule_bound(n);
}

SeparationProbability gaussian_separation_probability(double gamma) {
  check_gamma(gamma);
  return {std::erf(gamma / std::sqrt(2.0)), std::sqrt(2.0 / M_PI) * gamma};
}

double generalization_bound(std::int64_t n, double gamma, double epsilon) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  check_gamma(gamma);
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1]");
  }
  return std::log(1.0 / epsilon) / static_cast<double>(n + 1) / gamma;
}

}  // namespace qperc::bounds
