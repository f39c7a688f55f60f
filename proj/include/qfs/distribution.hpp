#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qfs {

// Discretized profit/loss distribution over 2^n ordered bins, bin 0 being
// the worst loss. `bin_edges` (2^n + 1 ascending values, basis points) are
// optional; when present they let bin-unit results be mapped back to P/L
// brackets.
struct DiscreteDistribution {
  std::vector<double> probabilities;
  std::vector<double> bin_edges;
  std::string label;

  int num_qubits() const;
  // Throws std::invalid_argument unless probabilities are non-negative, sum
  // to 1 within 1e-9, and have power-of-two length (with matching edges).
  void validate() const;
};

enum class OutlierPolicy { kClip, kDrop };

// Histograms a P/L series (basis points) into `num_bins` uniform bins over
// [lo, hi]. Out-of-range values are clamped into the edge bins or dropped
// per `policy`.
DiscreteDistribution discretize(const std::vector<double>& pl_series,
                                int num_bins, double lo, double hi,
                                OutlierPolicy policy);

// Brackets a (possibly fractional) bin-unit value between P/L bounds:
// lower = edges[floor(v)], upper = edges[ceil(v) + 1]. For an integer bin
// this is just that bin's own edge pair.
std::pair<double, double> bins_to_units(double value_bins,
                                        const std::vector<double>& edges);

// Loads a probability-array file: whitespace/comma separated reals summing
// to 1 or 100 (auto-detected, then normalized by the actual sum so the
// result is an exact distribution), with optional '# edges: e0 e1 ...'
// comment supplying bin edges and other '#' lines ignored.
DiscreteDistribution load_probability_file(const std::string& path);

// Loads a P/L series CSV: one numeric value (basis points) per line, with
// an optional leading date column and an optional header line.
std::vector<double> load_series_csv(const std::string& path);

}  // namespace qfs
