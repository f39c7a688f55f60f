#include "qfs/cli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qfs/distribution.hpp"
#include "qfs/hhl.hpp"
#include "qfs/linear_system.hpp"
#include "qfs/noise.hpp"
#include "qfs/qaoa.hpp"
#include "qfs/qubo.hpp"
#include "qfs/risk.hpp"
#include "qfs/rng.hpp"
#include "qfs/state_vector.hpp"

namespace qfs {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// FNV-1a 64-bit content digest, recorded in manifests so a replayed run can
// verify it saw the same inputs.
std::string digest_file(const std::string& path) {
  const std::string data = read_file(path);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

json make_manifest(const std::string& subcommand, std::uint64_t seed,
                   json parameters,
                   const std::map<std::string, std::string>& inputs) {
  json manifest;
  manifest["subcommand"] = subcommand;
  manifest["version"] = QFS_VERSION;
  manifest["rng"] = std::string(Rng::kAlgorithmId);
  manifest["seed"] = seed;
  manifest["parameters"] = std::move(parameters);
  manifest["inputs"] = inputs;
  return manifest;
}

void emit(const json& output) { std::cout << output.dump(2) << "\n"; }

json complex_list(const std::vector<cplx>& values) {
  json list = json::array();
  for (const cplx& v : values) list.push_back({v.real(), v.imag()});
  return list;
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

// Accepts plain numbers plus the convenient "pi" forms: "pi", "pi/6",
// "2pi/7", "3*pi/8", "-pi/3".
double parse_angle(std::string text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
  }
  const auto to_double = [&text](const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed angle: " + text);
    }
    if (used != token.size()) {
      throw std::invalid_argument("malformed angle: " + text);
    }
    return value;
  };
  const std::size_t pos = s.find("pi");
  if (pos == std::string::npos) return to_double(s);

  double coefficient = 1.0;
  std::string pre = s.substr(0, pos);
  if (!pre.empty() && pre.back() == '*') pre.pop_back();
  if (pre == "-") {
    coefficient = -1.0;
  } else if (!pre.empty()) {
    coefficient = to_double(pre);
  }
  double divisor = 1.0;
  const std::string post = s.substr(pos + 2);
  if (!post.empty()) {
    if (post.front() != '/') {
      throw std::invalid_argument("malformed angle: " + text);
    }
    divisor = to_double(post.substr(1));
    if (divisor == 0.0) throw std::invalid_argument("division by zero angle");
  }
  return coefficient * kPi / divisor;
}

// Splits a CSV/whitespace line into trimmed fields.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const auto begin = field.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      fields.emplace_back();
      continue;
    }
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(field.substr(begin, end - begin + 1));
  }
  return fields;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    (void)std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

struct LabeledCsv {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;  // numeric fields per labeled row
};

// Reads "label, v1, v2, ..." rows, skipping '#' comments, blank lines and a
// non-numeric header row.
LabeledCsv load_labeled_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  LabeledCsv out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> fields = split_fields(line);
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
    if (fields.empty()) continue;
    if (fields.size() >= 2 && !is_number(fields[1])) continue;  // header
    std::vector<double> values;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (!is_number(fields[i])) {
        throw std::invalid_argument("non-numeric field '" + fields[i] +
                                    "' in " + path);
      }
      values.push_back(std::stod(fields[i]));
    }
    out.labels.push_back(fields[0]);
    out.rows.push_back(std::move(values));
  }
  if (out.rows.empty()) {
    throw std::invalid_argument("no data rows in " + path);
  }
  return out;
}

// Numeric matrix CSV: rows of numbers only (comments/header tolerated).
Eigen::MatrixXcd load_matrix_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> fields = split_fields(line);
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
    if (fields.empty()) continue;
    bool numeric = true;
    for (const std::string& f : fields) numeric = numeric && is_number(f);
    if (!numeric) {
      if (rows.empty()) continue;  // header line
      throw std::invalid_argument("non-numeric matrix row in " + path);
    }
    std::vector<double> row;
    for (const std::string& f : fields) row.push_back(std::stod(f));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix file " + path);
  const std::size_t n = rows.size();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw std::invalid_argument("matrix must be square in " + path);
    }
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// ---------------------------------------------------------------------------
// risk subcommand
// ---------------------------------------------------------------------------

struct RiskArgs {
  std::string probabilities_path;
  std::string series_path;
  int bins = 8;
  std::vector<double> range;
  bool drop_outliers = false;
  std::vector<double> alphas{0.95, 0.99};
  std::string mode = "exact";
  int shots = 8192;
  std::uint64_t seed = 1;
};

json risk_report_json(const RiskReport& report,
                      const std::vector<double>& edges) {
  json j;
  j["backend"] = report.backend;
  j["expected_value"] = report.expected_value;
  j["std_dev"] = report.std_dev;
  if (!edges.empty()) {
    const auto [lo, hi] = bins_to_units(report.expected_value, edges);
    j["expected_value_units"] = {lo, hi};
  }
  json metrics = json::array();
  for (std::size_t i = 0; i < report.alphas.size(); ++i) {
    json m;
    m["alpha"] = report.alphas[i];
    m["var_bin"] = report.var_bins[i];
    m["cvar_bin"] = report.cvar_bins[i];
    if (!edges.empty()) {
      const auto [vlo, vhi] = bins_to_units(report.var_bins[i], edges);
      m["var_units"] = {vlo, vhi};
      const auto [clo, chi] = bins_to_units(report.cvar_bins[i], edges);
      m["cvar_units"] = {clo, chi};
    }
    metrics.push_back(std::move(m));
  }
  j["metrics"] = std::move(metrics);
  if (report.backend == "sampled") {
    j["shots"] = report.shots;
    j["seed"] = report.seed;
    j["variance_clamped"] = report.variance_clamped;
  }
  return j;
}

int cmd_risk(const RiskArgs& args) {
  const bool have_probs = !args.probabilities_path.empty();
  const bool have_series = !args.series_path.empty();
  if (have_probs == have_series) {
    throw std::invalid_argument(
        "choose exactly one input: --probabilities or --series");
  }

  std::map<std::string, std::string> inputs;
  DiscreteDistribution dist;
  if (have_probs) {
    inputs[args.probabilities_path] = digest_file(args.probabilities_path);
    dist = load_probability_file(args.probabilities_path);
  } else {
    inputs[args.series_path] = digest_file(args.series_path);
    if (args.range.size() != 2) {
      throw std::invalid_argument("--series requires --range LO HI");
    }
    const std::vector<double> series = load_series_csv(args.series_path);
    dist = discretize(series, args.bins, args.range[0], args.range[1],
                      args.drop_outliers ? OutlierPolicy::kDrop
                                         : OutlierPolicy::kClip);
  }

  json parameters;
  parameters["mode"] = args.mode;
  parameters["alphas"] = args.alphas;
  parameters["shots"] = args.shots;
  if (have_series) {
    parameters["bins"] = args.bins;
    parameters["range"] = args.range;
    parameters["outliers"] = args.drop_outliers ? "drop" : "clip";
  }

  json output;
  output["manifest"] = make_manifest("risk", args.seed, parameters, inputs);
  json dist_json;
  dist_json["label"] = dist.label;
  dist_json["num_qubits"] = dist.num_qubits();
  dist_json["probabilities"] = dist.probabilities;
  if (!dist.bin_edges.empty()) dist_json["bin_edges"] = dist.bin_edges;
  output["distribution"] = std::move(dist_json);

  output["classical"] =
      risk_report_json(classical_risk_oracle(dist, args.alphas),
                       dist.bin_edges);
  if (args.mode == "exact" || args.mode == "both") {
    output["exact"] = risk_report_json(
        quantum_risk_report(dist, args.alphas, RiskMode::kExact, 0, args.seed),
        dist.bin_edges);
  }
  if (args.mode == "sampled" || args.mode == "both") {
    output["sampled"] = risk_report_json(
        quantum_risk_report(dist, args.alphas, RiskMode::kSampled, args.shots,
                            args.seed),
        dist.bin_edges);
  }
  emit(output);
  return 0;
}

// ---------------------------------------------------------------------------
// balance subcommand
// ---------------------------------------------------------------------------

struct BalanceArgs {
  std::string matrix_path;
  std::string rhs_path;
  std::string portfolio_path;
  double gain = 0.0;
  double budget = 1.0;
  std::string system_name;
  std::string circuit_name;
  std::string theta = "pi/4";
  int t = 8;
  double time_scale = 0.0;
  std::string mode = "exact";
  int shots = 8192;
  std::uint64_t seed = 1;
};

// Pads a raw system to power-of-two dimension with inert identity rows.
LinearSystem pad_system(Eigen::MatrixXcd matrix, Eigen::VectorXcd rhs) {
  const int dim = static_cast<int>(matrix.rows());
  if (dim < 1 || matrix.cols() != dim || rhs.size() != dim) {
    throw std::invalid_argument("matrix/rhs dimensions disagree");
  }
  const int padded = padded_dimension(dim);
  LinearSystem sys;
  sys.matrix = Eigen::MatrixXcd::Zero(padded, padded);
  sys.matrix.topLeftCorner(dim, dim) = matrix;
  for (int i = dim; i < padded; ++i) sys.matrix(i, i) = 1.0;
  sys.rhs = Eigen::VectorXcd::Zero(padded);
  sys.rhs.head(dim) = rhs;
  sys.hermitian =
      (sys.matrix - sys.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10;
  sys.original_dim = dim;
  return sys;
}

PortfolioSpec load_portfolio_csv(const std::string& path) {
  const LabeledCsv csv = load_labeled_csv(path);
  const int n = static_cast<int>(csv.rows.size());
  PortfolioSpec spec;
  spec.covariance.resize(n, n);
  spec.returns.resize(n);
  spec.prices.resize(n);
  spec.labels = csv.labels;
  for (int i = 0; i < n; ++i) {
    // row schema: label, return, price, cov_0 ... cov_{n-1}
    if (static_cast<int>(csv.rows[i].size()) != n + 2) {
      throw std::invalid_argument(
          "portfolio rows need return, price and a full covariance row");
    }
    spec.returns(i) = csv.rows[i][0];
    spec.prices(i) = csv.rows[i][1];
    for (int j = 0; j < n; ++j) spec.covariance(i, j) = csv.rows[i][2 + j];
  }
  return spec;
}

json classical_solution_json(const ClassicalSolution& classical,
                             int original_dim) {
  json j;
  std::vector<cplx> raw(original_dim), normalized(original_dim);
  const double norm = classical.solution.norm();
  for (int i = 0; i < original_dim; ++i) {
    raw[i] = classical.solution(i);
    normalized[i] = classical.solution(i) / norm;
  }
  j["solution"] = complex_list(raw);
  j["normalized_solution"] = complex_list(normalized);
  j["eigenvalues"] = classical.eigenvalues;
  j["condition_number"] = classical.condition_number;
  return j;
}

json hhl_result_json(const HhlResult& result, int original_dim) {
  json j;
  std::vector<cplx> trimmed(result.solution.begin(),
                            result.solution.begin() + original_dim);
  j["solution"] = complex_list(trimmed);
  j["ancilla_probability"] = result.ancilla_probability;
  j["branch_probability"] = result.branch_probability;
  j["t"] = result.t;
  j["time_scale"] = result.time_scale;
  j["backend"] = result.backend;
  if (result.backend == "sampled") {
    j["shots"] = result.shots;
    j["seed"] = result.seed;
  }
  return j;
}

// Normalized asset weights from the solution block (entries 2..2+n of a
// portfolio system solution); scale-invariant, so usable on both the raw
// classical solution and the unit-norm quantum one.
json weights_json(const std::vector<cplx>& solution, int num_assets) {
  std::vector<double> w(num_assets);
  double total = 0.0;
  for (int i = 0; i < num_assets; ++i) {
    w[i] = solution[2 + i].real();
    total += w[i];
  }
  if (total == 0.0) throw NumericalError("weights sum to zero");
  json j = json::array();
  for (double v : w) j.push_back(v / total);
  return j;
}

int cmd_balance(const BalanceArgs& args) {
  const int providers = (!args.matrix_path.empty() ? 1 : 0) +
                        (!args.portfolio_path.empty() ? 1 : 0) +
                        (!args.system_name.empty() ? 1 : 0) +
                        (!args.circuit_name.empty() ? 1 : 0);
  if (providers != 1) {
    throw std::invalid_argument(
        "choose exactly one input: --matrix, --portfolio, --system or "
        "--circuit");
  }
  const bool sampled = args.mode == "sampled";
  std::map<std::string, std::string> inputs;

  json parameters;
  parameters["t"] = args.t;
  parameters["time_scale"] = args.time_scale;
  parameters["mode"] = args.mode;
  parameters["shots"] = args.shots;

  // Fixed reference circuit path: no LinearSystem machinery involved.
  if (!args.circuit_name.empty()) {
    const double theta = parse_angle(args.theta);
    parameters["circuit"] = args.circuit_name;
    parameters["theta"] = theta;
    const HhlResult result =
        hhl_2x2_reference(theta, sampled, args.shots, args.seed);

    Eigen::MatrixXcd a(2, 2);
    a << 1.5, 0.5, 0.5, 1.5;
    Eigen::VectorXcd b(2);
    b << std::cos(theta), std::sin(theta);
    const Eigen::VectorXcd x = a.fullPivLu().solve(b);

    json output;
    output["manifest"] =
        make_manifest("balance", args.seed, parameters, inputs);
    json classical;
    std::vector<cplx> normalized{x(0) / x.norm(), x(1) / x.norm()};
    classical["normalized_solution"] = complex_list(normalized);
    output["classical"] = std::move(classical);
    output["hhl"] = hhl_result_json(result, 2);
    emit(output);
    return 0;
  }

  LinearSystem sys;
  bool embedded = false;
  int num_assets = 0;
  if (!args.matrix_path.empty()) {
    if (args.rhs_path.empty()) {
      throw std::invalid_argument("--matrix requires --rhs");
    }
    inputs[args.matrix_path] = digest_file(args.matrix_path);
    inputs[args.rhs_path] = digest_file(args.rhs_path);
    parameters["matrix"] = args.matrix_path;
    parameters["rhs"] = args.rhs_path;
    const Eigen::MatrixXcd matrix = load_matrix_csv(args.matrix_path);
    const std::vector<double> rhs_values = load_series_csv(args.rhs_path);
    if (static_cast<Eigen::Index>(rhs_values.size()) != matrix.rows()) {
      throw std::invalid_argument("rhs length must match the matrix");
    }
    Eigen::VectorXcd rhs(matrix.rows());
    for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs(i) = rhs_values[i];
    sys = pad_system(matrix, rhs);
    if (!sys.hermitian) {
      sys = hermitian_embed(sys);
      embedded = true;
    }
  } else if (!args.portfolio_path.empty()) {
    inputs[args.portfolio_path] = digest_file(args.portfolio_path);
    parameters["portfolio"] = args.portfolio_path;
    parameters["gain"] = args.gain;
    parameters["budget"] = args.budget;
    PortfolioSpec spec = load_portfolio_csv(args.portfolio_path);
    spec.gain = args.gain;
    spec.budget = args.budget;
    num_assets = static_cast<int>(spec.returns.size());
    sys = build_portfolio_system(spec);
  } else if (args.system_name == "diag-demo") {
    parameters["system"] = args.system_name;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) a(i, i) = i + 1.0;
    Eigen::VectorXcd b = Eigen::VectorXcd::Ones(4);
    sys = pad_system(a, b);
  } else {  // bond-equity
    parameters["system"] = args.system_name;
    parameters["gain"] = args.gain;
    parameters["budget"] = args.budget;
    PortfolioSpec spec;
    spec.returns.resize(2);
    spec.returns << 5.86, 16.78;  // percent units
    spec.prices = Eigen::VectorXd::Ones(2);
    spec.covariance.resize(2, 2);
    spec.covariance << 0.15, -0.43, -0.43, 2.46;
    spec.gain = args.gain != 0.0 ? args.gain : 7.0;
    spec.budget = args.budget;
    spec.labels = {"bond", "equity"};
    num_assets = 2;
    sys = build_portfolio_system(spec);
  }

  // The bundled diagonal demo keeps its eigenvalues exactly representable on
  // the phase register with time scale 2pi/16; everything else defaults to
  // the automatic spectral rule.
  double time_scale = args.time_scale;
  if (time_scale == 0.0 && args.system_name == "diag-demo") {
    time_scale = 2.0 * kPi / 16.0;
  }

  HhlOptions options;
  options.t = args.t;
  options.time_scale = time_scale;
  options.sampled = sampled;
  options.shots = args.shots;
  options.seed = args.seed;

  const ClassicalSolution classical = classical_solve(sys);
  const HhlResult result = hhl_solve(sys, options);

  json output;
  output["manifest"] = make_manifest("balance", args.seed, parameters, inputs);
  json system_json;
  system_json["dimension"] = static_cast<int>(sys.matrix.rows());
  system_json["original_dimension"] = sys.original_dim;
  system_json["hermitian_embedded"] = embedded;
  if (!sys.labels.empty()) system_json["labels"] = sys.labels;
  output["system"] = std::move(system_json);
  output["classical"] = classical_solution_json(classical, sys.original_dim);
  output["hhl"] = hhl_result_json(result, sys.original_dim);
  if (num_assets > 0) {
    std::vector<cplx> classical_vec(sys.original_dim);
    for (int i = 0; i < sys.original_dim; ++i) {
      classical_vec[i] = classical.solution(i);
    }
    json weights;
    weights["classical"] = weights_json(classical_vec, num_assets);
    weights["hhl"] = weights_json(result.solution, num_assets);
    output["weights"] = std::move(weights);
  }
  emit(output);
  return 0;
}

// ---------------------------------------------------------------------------
// pick subcommand
// ---------------------------------------------------------------------------

struct PickArgs {
  std::string data_path;
  int m = 3;
  double lambda1 = 1.0;
  double lambda2 = 4.0;
  double lambda3 = 1.0;
  int depth = 1;
  int shots = 1024;
  std::uint64_t seed = 1;
  int max_iterations = 150;
  double tolerance = 1e-3;
  int restarts = 3;
  int jobs = 1;
  bool brute_force_only = false;
  bool include_trace = false;
};

int cmd_pick(const PickArgs& args) {
  if (args.data_path.empty()) {
    throw std::invalid_argument("--data CSV is required");
  }
  std::map<std::string, std::string> inputs;
  inputs[args.data_path] = digest_file(args.data_path);

  const LabeledCsv csv = load_labeled_csv(args.data_path);
  const int n = static_cast<int>(csv.rows.size());
  Eigen::VectorXd returns(n);
  Eigen::MatrixXd covariance(n, n);
  for (int i = 0; i < n; ++i) {
    // row schema: label, return, cov_0 ... cov_{n-1}
    if (static_cast<int>(csv.rows[i].size()) != n + 1) {
      throw std::invalid_argument(
          "asset rows need a return and a full covariance row");
    }
    returns(i) = csv.rows[i][0];
    for (int j = 0; j < n; ++j) covariance(i, j) = csv.rows[i][1 + j];
  }

  const QuboTask task =
      build_portfolio_qubo(returns, covariance, args.m, args.lambda1,
                           args.lambda2, args.lambda3, csv.labels);
  const auto feasible = [&](const std::vector<int>& bits) {
    int ones = 0;
    for (int b : bits) ones += b;
    return ones == args.m;
  };
  const BruteForceResult table = brute_force(task, feasible);

  json parameters;
  parameters["m"] = args.m;
  parameters["lambda1"] = args.lambda1;
  parameters["lambda2"] = args.lambda2;
  parameters["lambda3"] = args.lambda3;
  parameters["depth"] = args.depth;
  parameters["shots"] = args.shots;
  parameters["max_iterations"] = args.max_iterations;
  parameters["tolerance"] = args.tolerance;
  parameters["restarts"] = args.restarts;
  parameters["brute_force_only"] = args.brute_force_only;

  json output;
  output["manifest"] = make_manifest("pick", args.seed, parameters, inputs);
  output["assets"] = csv.labels;

  json brute;
  const BruteForceRow& best = table.rows[table.best_row];
  brute["best"] = {{"bits", bits_to_string(best.bits)},
                   {"objective", best.objective}};
  json rows = json::array();
  for (const BruteForceRow& row : table.rows) {
    rows.push_back({{"bits", bits_to_string(row.bits)},
                    {"objective", row.objective},
                    {"feasible", row.feasible}});
  }
  brute["rows"] = std::move(rows);
  output["brute_force"] = std::move(brute);

  if (!args.brute_force_only) {
    QaoaConfig config;
    config.depth = args.depth;
    config.shots = args.shots;
    config.seed = args.seed;
    config.max_iterations = args.max_iterations;
    config.tolerance = args.tolerance;
    config.restarts = args.restarts;
    config.jobs = args.jobs;
    const QaoaResult result = qaoa_solve(task, config);

    json qaoa;
    qaoa["bits"] = bits_to_string(result.bits);
    qaoa["objective"] = result.objective;
    qaoa["feasible"] = feasible(result.bits);
    qaoa["iterations"] = result.iterations;
    qaoa["budget_exhausted"] = result.budget_exhausted;
    qaoa["best_energy"] = result.best_energy;
    qaoa["best_betas"] = result.best_betas;
    qaoa["best_gammas"] = result.best_gammas;
    qaoa["trace_points"] = result.trace.size();
    if (args.include_trace) {
      json trace = json::array();
      for (const QaoaTracePoint& point : result.trace) {
        trace.push_back({{"restart", point.restart},
                         {"evaluation", point.evaluation},
                         {"betas", point.betas},
                         {"gammas", point.gammas},
                         {"energy", point.energy}});
      }
      qaoa["trace"] = std::move(trace);
    }
    output["qaoa"] = std::move(qaoa);
    output["agreement"] = bits_to_string(result.bits) ==
                          bits_to_string(best.bits);
  }
  emit(output);
  return 0;
}

// ---------------------------------------------------------------------------
// decohere subcommand
// ---------------------------------------------------------------------------

struct DecohereArgs {
  std::string mode;  // relax | dephase
  double t1 = 100.0;
  double t2 = 100.0;
  double idle_step = 0.1;
  int idles = 200;
  int shots = 8192;
  std::uint64_t seed = 1;
};

int cmd_decohere(const DecohereArgs& args) {
  NoiseParams params{args.t1, args.t2, args.idle_step};
  const DecoherenceCurve curve =
      args.mode == "relax"
          ? relaxation_experiment(params, args.idles, args.shots, args.seed)
          : dephasing_experiment(params, args.idles, args.shots, args.seed);

  json parameters;
  parameters["mode"] = args.mode;
  parameters["t1"] = args.t1;
  parameters["t2"] = args.t2;
  parameters["idle_step"] = args.idle_step;
  parameters["idles"] = args.idles;
  parameters["shots"] = args.shots;
  // Curve goes to stdout as plain CSV for plotting tools; the manifest rides
  // on stderr so the data stream stays clean.
  std::cerr << make_manifest("decohere", args.seed, parameters, {}).dump()
            << "\n";

  std::cout << "k,p1\n";
  for (std::size_t k = 0; k < curve.p1.size(); ++k) {
    char line[64];
    std::snprintf(line, sizeof(line), "%zu,%.17g\n", k, curve.p1[k]);
    std::cout << line;
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Argument wiring
// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "qfsim: statevector quantum simulator with portfolio-finance "
      "experiments (risk metrics, linear-system balancing, asset selection, "
      "decoherence curves)"};
  app.require_subcommand(1);

  RiskArgs risk_args;
  CLI::App* risk = app.add_subcommand(
      "risk", "amplitude-encoded risk metrics (E, sigma, VaR, CVaR)");
  risk->add_option("--probabilities", risk_args.probabilities_path,
                   "probability-array file (sums to 1 or 100)");
  risk->add_option("--series", risk_args.series_path,
                   "P/L series CSV (one value per line)");
  risk->add_option("--bins", risk_args.bins,
                   "histogram bins for --series (power of two)");
  risk->add_option("--range", risk_args.range,
                   "histogram range LO HI for --series")
      ->expected(2);
  risk->add_flag("--drop", risk_args.drop_outliers,
                 "drop out-of-range values instead of clipping");
  risk->add_option("--alpha", risk_args.alphas,
                   "significance levels (default 0.95 0.99)")
      ->expected(-1);
  risk->add_option("--mode", risk_args.mode, "exact | sampled | both")
      ->check(CLI::IsMember({"exact", "sampled", "both"}));
  risk->add_option("--shots", risk_args.shots, "samples per circuit run");
  risk->add_option("--seed", risk_args.seed, "master RNG seed");

  BalanceArgs balance_args;
  CLI::App* balance = app.add_subcommand(
      "balance", "portfolio balancing via the quantum linear-system solver");
  balance->add_option("--matrix", balance_args.matrix_path,
                      "square numeric CSV for A");
  balance->add_option("--rhs", balance_args.rhs_path,
                      "right-hand side (one value per line)");
  balance->add_option("--portfolio", balance_args.portfolio_path,
                      "asset CSV: label, return, price, covariance row");
  balance->add_option("--gain", balance_args.gain, "target portfolio gain");
  balance->add_option("--budget", balance_args.budget, "budget constraint");
  balance->add_option("--system", balance_args.system_name,
                      "bundled demo system")
      ->check(CLI::IsMember({"diag-demo", "bond-equity"}));
  balance->add_option("--circuit", balance_args.circuit_name,
                      "fixed reference circuit (2x2 system)")
      ->check(CLI::IsMember({"ref2x2"}));
  balance->add_option("--theta", balance_args.theta,
                      "rhs angle for --circuit (accepts pi forms)");
  balance->add_option("-t,--phase-qubits", balance_args.t,
                      "phase-register width");
  balance->add_option("--time-scale", balance_args.time_scale,
                      "evolution time scale (0 = automatic)");
  balance->add_option("--mode", balance_args.mode, "exact | sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  balance->add_option("--shots", balance_args.shots, "samples when sampled");
  balance->add_option("--seed", balance_args.seed, "master RNG seed");

  PickArgs pick_args;
  CLI::App* pick = app.add_subcommand(
      "pick", "asset selection via QAOA with a brute-force oracle");
  pick->add_option("--data", pick_args.data_path,
                   "asset CSV: label, return, covariance row")
      ->required();
  pick->add_option("--m", pick_args.m, "number of assets to select");
  pick->add_option("--l1", pick_args.lambda1, "return reward weight");
  pick->add_option("--l2", pick_args.lambda2, "risk penalty weight");
  pick->add_option("--l3", pick_args.lambda3, "cardinality penalty weight");
  pick->add_option("--depth", pick_args.depth, "ansatz layers");
  pick->add_option("--shots", pick_args.shots, "samples per evaluation");
  pick->add_option("--seed", pick_args.seed, "master RNG seed");
  pick->add_option("--max-iterations", pick_args.max_iterations,
                   "energy evaluations per restart");
  pick->add_option("--tolerance", pick_args.tolerance,
                   "optimizer convergence tolerance");
  pick->add_option("--restarts", pick_args.restarts, "optimizer restarts");
  pick->add_option("--jobs", pick_args.jobs,
                   "worker threads across restarts");
  pick->add_flag("--brute-force-only", pick_args.brute_force_only,
                 "skip the quantum run");
  pick->add_flag("--trace", pick_args.include_trace,
                 "include the full optimizer trace");

  DecohereArgs decohere_args;
  CLI::App* decohere = app.add_subcommand(
      "decohere", "relaxation/dephasing curves (CSV on stdout)");
  decohere->add_option("--mode", decohere_args.mode, "relax | dephase")
      ->check(CLI::IsMember({"relax", "dephase"}))
      ->required();
  decohere->add_option("--t1", decohere_args.t1, "relaxation time (us)");
  decohere->add_option("--t2", decohere_args.t2, "dephasing time (us)");
  decohere->add_option("--idle-step", decohere_args.idle_step,
                       "idle gate duration (us)");
  decohere->add_option("--idles", decohere_args.idles,
                       "maximum idle-gate count");
  decohere->add_option("--shots", decohere_args.shots,
                       "trajectories per point");
  decohere->add_option("--seed", decohere_args.seed, "master RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    int code = 1;
    std::string name;
    if (risk->parsed()) {
      name = "risk";
      code = cmd_risk(risk_args);
    } else if (balance->parsed()) {
      name = "balance";
      code = cmd_balance(balance_args);
    } else if (pick->parsed()) {
      name = "pick";
      code = cmd_pick(pick_args);
    } else if (decohere->parsed()) {
      name = "decohere";
      code = cmd_decohere(decohere_args);
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    std::cerr << "[qfsim] " << name << " finished in " << elapsed.count()
              << " ms\n";
    return code;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qfs
