#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qperc/rng.hpp"

namespace qperc {

struct LabeledPoint {
  std::vector<double> x;
  int y;  // -1 or +1
};

struct LabeledDataset {
  std::string name;
  std::size_t dim = 0;
  std::vector<LabeledPoint> points;

  std::size_t size() const { return points.size(); }
};

struct Hyperplane {
  std::vector<double> w;
};

enum class MarginMethod { analytic, optimizer, exhaustive_2d };

struct MarginReport {
  double gamma = 0.0;           // 0 means not linearly separable (through the origin)
  Hyperplane witness;           // empty when gamma == 0
  MarginMethod method = MarginMethod::optimizer;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);

// Hard dataset S_H(n): n points in dimension n, x_i = (-1)^{i+1} e_i,
// y_i = (-1)^i (1-based i). All points unit norm, margin 1/sqrt(n).
LabeledDataset make_hard_dataset(std::int64_t n);

// Two-class CSV ingestion: numeric feature columns followed by a class
// column; rows labelled class_a map to +1, class_b to -1, others are
// dropped. A non-numeric first row is treated as a header.
LabeledDataset load_two_class_csv(const std::string& path, const std::string& class_a,
                                  const std::string& class_b);

// Divide every point by the maximum point norm. Identity (exact copy) when
// the maximum norm is already within 1e-12 of 1, which makes the operation
// idempotent bit-for-bit.
LabeledDataset normalize(const LabeledDataset& ds);

// Separable dataset with margin exactly gamma. A random unit direction u is
// planted together with a support pair z = gamma*u +- rho*v (one point per
// class), so gamma*u lies in the convex hull of {y_i x_i} and no direction
// can do better. Remaining points are sampled on the unit sphere, reflected
// to satisfy y<u,x> >= gamma, and their components orthogonal to u shrunk.
// rho is calibrated so the probability that a standard Gaussian hyperplane
// separates the result matches sqrt(2/pi)*gamma to first order.
LabeledDataset make_planted_margin_dataset(std::int64_t n, std::int64_t d, double gamma,
                                           std::uint64_t seed);

// k independent standard Gaussian vectors in R^d, deterministic per seed.
std::vector<Hyperplane> sample_hyperplanes(std::int64_t k, std::int64_t d,
                                           std::uint64_t seed);

// Maximum margin over unit directions through the origin,
//   gamma = max_w min_i y_i <w, x_i> / ||w||,
// computed as the distance from the origin to conv{y_i x_i} (MDM pairwise
// descent with a duality-gap stopping rule). Non-separable data yields
// gamma = 0 with no witness rather than an error. The reported gamma is the
// margin actually achieved by the returned witness.
MarginReport margin(const LabeledDataset& ds);

// Exhaustive angular sweep for d = 2 (resolution 1e-5 rad, golden-section
// refinement); independent oracle for the optimizer.
MarginReport margin_2d_sweep(const LabeledDataset& ds);

// Dataset export/import, schema: dim,label,x0,...,x{D-1} per row.
void export_csv(const LabeledDataset& ds, const std::string& path);
LabeledDataset import_csv(const std::string& path);

}  // namespace qperc
