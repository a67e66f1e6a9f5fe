#pragma once

#include <map>
#include <string>
#include <vector>

namespace qperc {

// Write via a temp file in the same directory plus rename, creating parent
// directories as needed.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws if absent
};

CsvTable read_csv(const std::string& path);

// key=value lines, keys in sorted order.
std::string format_meta(const std::map<std::string, std::string>& kv);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population form, 0 for a single sample
};
MeanStd mean_std(const std::vector<double>& xs);

std::string format_g(double v);  // %.12g

}  // namespace qperc
