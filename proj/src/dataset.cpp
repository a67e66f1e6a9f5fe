#include "qperc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qperc {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

LabeledDataset make_hard_dataset(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("hard dataset requires n >= 1");
  LabeledDataset ds;
  ds.name = "hard" + std::to_string(n);
  ds.dim = static_cast<std::size_t>(n);
  ds.points.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) {
    LabeledPoint& p = ds.points[static_cast<std::size_t>(i - 1)];
    p.x.assign(ds.dim, 0.0);
    p.x[static_cast<std::size_t>(i - 1)] = (i % 2 == 1) ? 1.0 : -1.0;  // (-1)^{i+1}
    p.y = (i % 2 == 0) ? 1 : -1;                                       // (-1)^i
  }
  return ds;
}

namespace {

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

LabeledDataset load_two_class_csv(const std::string& path, const std::string& class_a,
                                  const std::string& class_b) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  LabeledDataset ds;
  ds.name = std::filesystem::path(path).stem().string();

  std::string line;
  std::size_t row = 0;
  bool saw_any_row = false;
  std::size_t n_a = 0, n_b = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_row(line);
    if (fields.size() < 2) {
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               " has fewer than 2 columns");
    }
    // Header detection: first data row whose feature fields are all
    // non-numeric is skipped.
    if (!saw_any_row) {
      bool all_text = true;
      double tmp;
      for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
        if (parse_double(trim(fields[c]), tmp)) all_text = false;
      }
      if (all_text) continue;
    }
    saw_any_row = true;

    const std::string label = trim(fields.back());
    int y = 0;
    if (label == class_a) y = +1;
    else if (label == class_b) y = -1;
    else continue;  // other classes dropped

    LabeledPoint p;
    p.y = y;
    p.x.reserve(fields.size() - 1);
    for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
      double v;
      if (!parse_double(trim(fields[c]), v)) {
        throw std::runtime_error(path + ": malformed numeric field at row " +
                                 std::to_string(row) + ", column " + std::to_string(c + 1));
      }
      p.x.push_back(v);
    }
    if (ds.points.empty()) {
      ds.dim = p.x.size();
    } else if (p.x.size() != ds.dim) {
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               " has inconsistent dimension");
    }
    (y > 0 ? n_a : n_b) += 1;
    ds.points.push_back(std::move(p));
  }
  if (ds.points.empty()) throw std::runtime_error(path + ": no rows");
  if (n_a < 2 || n_b < 2) {
    throw std::runtime_error(path + ": fewer than 2 rows per class (" + class_a + ": " +
                             std::to_string(n_a) + ", " + class_b + ": " +
                             std::to_string(n_b) + ")");
  }
  return ds;
}

LabeledDataset normalize(const LabeledDataset& ds) {
  if (ds.points.empty()) throw std::invalid_argument("normalize: empty dataset");
  double max_norm = 0.0;
  for (const LabeledPoint& p : ds.points) max_norm = std::max(max_norm, norm2(p.x));
  if (max_norm == 0.0) throw std::invalid_argument("normalize: all-zero dataset");
  if (std::abs(max_norm - 1.0) <= 1e-12) return ds;
  LabeledDataset out = ds;
  for (LabeledPoint& p : out.points) {
    for (double& v : p.x) v /= max_norm;
  }
  return out;
}

LabeledDataset make_planted_margin_dataset(std::int64_t n, std::int64_t d, double gamma,
                                           std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("planted dataset requires n >= 2");
  if (d < 2) throw std::invalid_argument("planted dataset requires d >= 2");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in (0,1)");
  }
  Rng rng(seed);
  const std::size_t dim = static_cast<std::size_t>(d);

  auto gaussian_unit = [&](Rng& r) {
    std::vector<double> v(dim);
    double nrm = 0.0;
    do {
      for (double& c : v) c = r.normal();
      nrm = norm2(v);
    } while (nrm < 1e-12);
    for (double& c : v) c /= nrm;
    return v;
  };

  const std::vector<double> u = gaussian_unit(rng);
  // v: random unit direction orthogonal to u.
  std::vector<double> v = gaussian_unit(rng);
  {
    const double c = dot(v, u);
    for (std::size_t i = 0; i < dim; ++i) v[i] -= c * u[i];
    double nrm = norm2(v);
    while (nrm < 1e-8) {  // v happened to be parallel to u; redraw
      v = gaussian_unit(rng);
      const double c2 = dot(v, u);
      for (std::size_t i = 0; i < dim; ++i) v[i] -= c2 * u[i];
      nrm = norm2(v);
    }
    for (double& c2 : v) c2 /= nrm;
  }

  // Perpendicular radius of the support pair. atan(gamma/rho)/pi is the
  // probability that a Gaussian hyperplane satisfies both pair constraints;
  // calibrate it to sqrt(2/pi)*gamma (clamped so the pair stays in the
  // unit ball and the formula stays in range).
  const double target_angle =
      std::min(M_PI * std::sqrt(2.0 / M_PI) * gamma, M_PI / 2 * 0.999);
  double rho = gamma / std::tan(target_angle);
  rho = std::min(rho, std::sqrt(1.0 - gamma * gamma));

  LabeledDataset ds;
  ds.name = "planted_n" + std::to_string(n) + "_d" + std::to_string(d);
  ds.dim = dim;
  ds.points.resize(static_cast<std::size_t>(n));

  // Support pair: z = gamma*u +- rho*v with z = y*x.
  for (int s = 0; s < 2; ++s) {
    LabeledPoint& p = ds.points[static_cast<std::size_t>(s)];
    p.y = (s == 0) ? +1 : -1;
    p.x.resize(dim);
    const double sv = (s == 0) ? rho : -rho;
    for (std::size_t i = 0; i < dim; ++i) {
      const double z = gamma * u[i] + sv * v[i];
      p.x[i] = p.y * z;
    }
  }

  // Bulk: on-sphere directions reflected to the labelled side with margin
  // at least gamma, perpendicular part shrunk so these points rarely bind
  // a Gaussian separator that already satisfies the pair.
  const double shrink = gamma / 20.0;
  for (std::int64_t i = 2; i < n; ++i) {
    LabeledPoint& p = ds.points[static_cast<std::size_t>(i)];
    p.y = (i % 2 == 0) ? +1 : -1;
    double m = 0.0;
    std::vector<double> dir;
    int tries = 0;
    do {
      if (++tries > 1000000) {
        throw std::runtime_error("planted dataset: margin too large to sample");
      }
      dir = gaussian_unit(rng);
      m = std::abs(dot(dir, u));
    } while (m < gamma);
    // reflect so the component along u is +m, then attach the label
    const double c = dot(dir, u);
    if (c < 0.0) {
      for (std::size_t j = 0; j < dim; ++j) dir[j] = -dir[j];
    }
    p.x.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const double perp = dir[j] - m * u[j];
      const double z = m * u[j] + shrink * perp;
      p.x[j] = p.y * z;
    }
  }
  return ds;
}

std::vector<Hyperplane> sample_hyperplanes(std::int64_t k, std::int64_t d,
                                           std::uint64_t seed) {
  if (k < 1 || d < 1) throw std::invalid_argument("sample_hyperplanes: k, d must be >= 1");
  Rng rng(seed);
  std::vector<Hyperplane> out(static_cast<std::size_t>(k));
  for (Hyperplane& h : out) {
    h.w.resize(static_cast<std::size_t>(d));
    for (double& c : h.w) c = rng.normal();
  }
  return out;
}

void export_csv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "dim,label";
  for (std::size_t j = 0; j < ds.dim; ++j) out << ",x" << j;
  out << "\n";
  char buf[40];
  for (const LabeledPoint& p : ds.points) {
    out << ds.dim << "," << p.y;
    for (double v : p.x) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
}

LabeledDataset import_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LabeledDataset ds;
  ds.name = std::filesystem::path(path).stem().string();
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (row == 1 && line.rfind("dim,label", 0) == 0) continue;
    std::vector<std::string> fields = split_csv_row(line);
    if (fields.size() < 3) {
      throw std::runtime_error(path + ": row " + std::to_string(row) + " too short");
    }
    LabeledPoint p;
    double v;
    if (!parse_double(trim(fields[1]), v) || (v != 1.0 && v != -1.0)) {
      throw std::runtime_error(path + ": bad label at row " + std::to_string(row));
    }
    p.y = static_cast<int>(v);
    for (std::size_t c = 2; c < fields.size(); ++c) {
      if (!parse_double(trim(fields[c]), v)) {
        throw std::runtime_error(path + ": malformed numeric field at row " +
                                 std::to_string(row) + ", column " + std::to_string(c + 1));
      }
      p.x.push_back(v);
    }
    if (ds.points.empty()) ds.dim = p.x.size();
    else if (p.x.size() != ds.dim) {
      throw std::runtime_error(path + ": inconsistent dimension at row " +
                               std::to_string(row));
    }
    ds.points.push_back(std::move(p));
  }
  if (ds.points.empty()) throw std::runtime_error(path + ": no rows");
  return ds;
}

}  // namespace qperc
