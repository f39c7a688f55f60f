#include "qfs/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qfs {

namespace {

bool is_power_of_two(std::size_t v) { return v > 0 && (v & (v - 1)) == 0; }

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return in;
}

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& context) {
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream stream(cleaned);
  std::vector<double> values;
  double v = 0.0;
  while (stream >> v) values.push_back(v);
  std::string leftover;
  if (stream.clear(), stream >> leftover) {
    throw std::invalid_argument("malformed number '" + leftover + "' in " +
                                context);
  }
  return values;
}

}  // namespace

int DiscreteDistribution::num_qubits() const {
  int n = 0;
  while ((std::size_t{1} << n) < probabilities.size()) ++n;
  return n;
}

void DiscreteDistribution::validate() const {
  if (!is_power_of_two(probabilities.size()) || probabilities.size() < 2) {
    throw std::invalid_argument(
        "distribution needs a power-of-two number of bins (>= 2)");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("negative bin probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("bin probabilities must sum to 1");
  }
  if (!bin_edges.empty()) {
    if (bin_edges.size() != probabilities.size() + 1) {
      throw std::invalid_argument("need one more bin edge than bins");
    }
    if (!std::is_sorted(bin_edges.begin(), bin_edges.end())) {
      throw std::invalid_argument("bin edges must be ascending");
    }
  }
}

DiscreteDistribution discretize(const std::vector<double>& pl_series,
                                int num_bins, double lo, double hi,
                                OutlierPolicy policy) {
  if (pl_series.empty()) throw std::invalid_argument("empty P/L series");
  if (num_bins < 2 || (num_bins & (num_bins - 1)) != 0) {
    throw std::invalid_argument("bin count must be a power of two >= 2");
  }
  if (!(lo < hi)) throw std::invalid_argument("bin range must satisfy lo < hi");

  const double width = (hi - lo) / num_bins;
  std::vector<long> counts(num_bins, 0);
  long kept = 0;
  for (double v : pl_series) {
    if (v < lo || v > hi) {
      if (policy == OutlierPolicy::kDrop) continue;
      v = std::clamp(v, lo, hi);
    }
    int bin = static_cast<int>((v - lo) / width);
    bin = std::clamp(bin, 0, num_bins - 1);  // hi itself lands in the top bin
    ++counts[bin];
    ++kept;
  }
  if (kept == 0) {
    throw std::invalid_argument("no P/L values fall inside the bin range");
  }

  DiscreteDistribution dist;
  dist.probabilities.resize(num_bins);
  for (int i = 0; i < num_bins; ++i) {
    dist.probabilities[i] = static_cast<double>(counts[i]) / kept;
  }
  dist.bin_edges.resize(num_bins + 1);
  for (int i = 0; i <= num_bins; ++i) dist.bin_edges[i] = lo + i * width;
  dist.validate();
  return dist;
}

std::pair<double, double> bins_to_units(double value_bins,
                                        const std::vector<double>& edges) {
  if (edges.size() < 2) {
    throw std::invalid_argument("bin edges are required for unit conversion");
  }
  const int num_bins = static_cast<int>(edges.size()) - 1;
  const int lo_bin =
      std::clamp(static_cast<int>(std::floor(value_bins)), 0, num_bins - 1);
  const int hi_bin =
      std::clamp(static_cast<int>(std::ceil(value_bins)), 0, num_bins - 1);
  return {edges[lo_bin], edges[hi_bin + 1]};
}

DiscreteDistribution load_probability_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  DiscreteDistribution dist;
  std::string line, numbers_text;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      const auto pos = line.find("edges:");
      if (pos != std::string::npos) {
        dist.bin_edges = parse_numbers(line.substr(pos + 6), path);
      }
      continue;
    }
    numbers_text += line + " ";
  }
  dist.probabilities = parse_numbers(numbers_text, path);
  if (dist.probabilities.empty()) {
    throw std::invalid_argument("no probabilities found in " + path);
  }

  double sum = 0.0;
  for (double p : dist.probabilities) sum += p;
  // Accept unit- or percent-scaled arrays; normalize by the actual sum so
  // slightly rounded published arrays still form exact distributions.
  if (std::abs(sum - 100.0) < 1.0 || std::abs(sum - 1.0) < 0.01) {
    for (double& p : dist.probabilities) p /= sum;
  } else {
    throw std::invalid_argument("probabilities in " + path +
                                " sum to neither 1 nor 100");
  }
  dist.label = path;
  dist.validate();
  return dist;
}

std::vector<double> load_series_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<double> values;
  std::string line;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream stream(cleaned);
    std::string token, last_token;
    while (stream >> token) last_token = token;
    if (last_token.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(last_token, &used);
      if (used != last_token.size()) throw std::invalid_argument(last_token);
      values.push_back(v);
    } catch (const std::exception&) {
      if (first_content_line) {
        first_content_line = false;  // header row
        continue;
      }
      throw std::invalid_argument("malformed P/L value '" + last_token +
                                  "' in " + path);
    }
    first_content_line = false;
  }
  if (values.empty()) {
    throw std::invalid_argument("no P/L values found in " + path);
  }
  return values;
}

}  // namespace qfs
