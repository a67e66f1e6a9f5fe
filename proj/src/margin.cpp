#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qperc/dataset.hpp"

namespace qperc {

namespace {

// Lazily filled Gram matrix of the z_i = y_i x_i vectors. MDM only touches
// rows of points that enter the support, so most rows are never computed.
class GramCache {
 public:
  explicit GramCache(const std::vector<std::vector<double>>& z) : z_(z), rows_(z.size()) {}

  const std::vector<double>& row(std::size_t i) {
    std::vector<double>& r = rows_[i];
    if (r.empty()) {
      const std::size_t n = z_.size();
      r.resize(n);
      const std::vector<double>& zi = z_[i];
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
        r[static_cast<std::size_t>(j)] = dot(zi, z_[static_cast<std::size_t>(j)]);
      }
    }
    return r;
  }

 private:
  const std::vector<std::vector<double>>& z_;
  std::vector<std::vector<double>> rows_;
};

std::vector<std::vector<double>> signed_points(const LabeledDataset& ds) {
  std::vector<std::vector<double>> z(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    z[i] = ds.points[i].x;
    if (ds.points[i].y < 0) {
      for (double& v : z[i]) v = -v;
    }
  }
  return z;
}

// Margin actually achieved by w on ds, min_i y_i <w, x_i> / ||w||.
double achieved_margin(const LabeledDataset& ds, const std::vector<double>& w) {
  const double nw = norm2(w);
  if (nw == 0.0) return 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (const LabeledPoint& p : ds.points) {
    worst = std::min(worst, p.y * dot(w, p.x) / nw);
  }
  return worst;
}

}  // namespace

MarginReport margin(const LabeledDataset& ds) {
  if (ds.points.empty()) throw std::invalid_argument("margin: empty dataset");
  const std::size_t n = ds.size();
  const std::vector<std::vector<double>> z = signed_points(ds);
  GramCache gram(z);

  // Distance from the origin to conv{z_i} via MDM: move weight from the
  // support point with the largest <w, z> to the global smallest until the
  // duality gap ||w||^2 - min_i <w, z_i> certifies convergence.
  std::vector<double> lambda(n, 0.0);
  std::size_t start = 0;
  {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double nz = dot(z[i], z[i]);
      if (nz < best) {
        best = nz;
        start = i;
      }
    }
  }
  lambda[start] = 1.0;
  std::vector<double> d = gram.row(start);
  double ww = d[start];

  const std::int64_t max_iters = 5'000'000;
  const std::int64_t rebuild_every = 4096;
  bool separable = true;
  for (std::int64_t it = 0; it < max_iters; ++it) {
    if (ww <= 1e-18) {
      separable = false;  // origin (numerically) inside the hull
      break;
    }
    std::size_t imin = 0, imax = 0;
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] < dmin) {
        dmin = d[i];
        imin = i;
      }
      if (lambda[i] > 0.0 && d[i] > dmax) {
        dmax = d[i];
        imax = i;
      }
    }
    const double gap = ww - dmin;
    if (gap <= 1e-10 * std::sqrt(ww) || gap <= 1e-16) break;
    const double delta = dmax - dmin;
    if (delta <= 0.0) break;

    const std::vector<double>& ga = gram.row(imax);
    const std::vector<double>& gb = gram.row(imin);
    const double q = ga[imax] + gb[imin] - 2.0 * ga[imin];
    if (q <= 1e-300) break;
    const double t = std::min(delta / q, lambda[imax]);
    ww += 2.0 * t * (d[imin] - d[imax]) + t * t * q;
    lambda[imax] -= t;
    lambda[imin] += t;
    if (lambda[imax] < 1e-300) lambda[imax] = 0.0;
    for (std::size_t k = 0; k < n; ++k) d[k] += t * (gb[k] - ga[k]);

    if ((it + 1) % rebuild_every == 0) {
      // Refresh d and ww from lambda to cancel incremental rounding.
      std::fill(d.begin(), d.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (lambda[j] <= 0.0) continue;
        const std::vector<double>& gj = gram.row(j);
        const double lj = lambda[j];
        for (std::size_t k = 0; k < n; ++k) d[k] += lj * gj[k];
      }
      ww = 0.0;
      for (std::size_t j = 0; j < n; ++j) ww += lambda[j] * d[j];
    }
  }

  MarginReport rep;
  rep.method = MarginMethod::optimizer;
  if (!separable) return rep;

  std::vector<double> w(ds.dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (lambda[j] <= 0.0) continue;
    for (std::size_t c = 0; c < ds.dim; ++c) w[c] += lambda[j] * z[j][c];
  }
  const double nw = norm2(w);
  if (nw <= 1e-12) return rep;
  for (double& c : w) c /= nw;
  const double gamma = achieved_margin(ds, w);
  if (gamma <= 0.0) return rep;
  rep.gamma = gamma;
  rep.witness.w = std::move(w);
  return rep;
}

MarginReport margin_2d_sweep(const LabeledDataset& ds) {
  if (ds.dim != 2) throw std::invalid_argument("margin_2d_sweep requires dimension 2");
  if (ds.points.empty()) throw std::invalid_argument("margin: empty dataset");
  const std::vector<std::vector<double>> z = signed_points(ds);

  auto eval = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    double worst = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& zi : z) worst = std::min(worst, c * zi[0] + s * zi[1]);
    return worst;
  };

  const double step = 1e-5;
  double best_phi = 0.0, best_val = eval(0.0);
  const std::int64_t steps = static_cast<std::int64_t>(2.0 * M_PI / step);
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double phi = step * static_cast<double>(i);
    const double val = eval(phi);
    if (val > best_val) {
      best_val = val;
      best_phi = phi;
    }
  }

  // Golden-section refinement around the grid optimum.
  double a = best_phi - 2.0 * step, b = best_phi + 2.0 * step;
  const double inv_phi = 0.6180339887498948482;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval(x1);
    }
  }
  const double phi = 0.5 * (a + b);
  const double val = eval(phi);

  MarginReport rep;
  rep.method = MarginMethod::exhaustive_2d;
  if (val <= 0.0) return rep;
  rep.gamma = val;
  rep.witness.w = {std::cos(phi), std::sin(phi)};
  return rep;
}

}  // namespace qperc
