#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "qfs/hhl.hpp"
#include "qfs/linear_system.hpp"
#include "qfs/rng.hpp"
#include "qfs/state_vector.hpp"

namespace {

using qfs::cplx;

constexpr double kPi = std::numbers::pi;

qfs::LinearSystem make_system(Eigen::MatrixXcd matrix, Eigen::VectorXcd rhs) {
  qfs::LinearSystem sys;
  sys.matrix = std::move(matrix);
  sys.rhs = std::move(rhs);
  sys.hermitian = true;
  sys.original_dim = static_cast<int>(sys.matrix.rows());
  return sys;
}

// diag(1, 2, 3, 4) with the uniform right-hand side; eigenvalues sit exactly
// on the t = 4 phase grid when tau = 2 pi / 16.
qfs::LinearSystem diag_demo() {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = 3.0;
  a(3, 3) = 4.0;
  Eigen::VectorXcd b(4);
  b << 1.0, 1.0, 1.0, 1.0;
  return make_system(std::move(a), std::move(b));
}

qfs::PortfolioSpec bond_equity_spec() {
  qfs::PortfolioSpec spec;
  spec.returns = Eigen::VectorXd(2);
  spec.returns << 5.86, 16.78;
  spec.prices = Eigen::VectorXd::Ones(2);
  spec.covariance = Eigen::MatrixXd(2, 2);
  spec.covariance << 0.15, -0.43, -0.43, 2.46;
  spec.gain = 7.0;
  spec.budget = 1.0;
  spec.labels = {"bond", "equity"};
  return spec;
}

// Classical solution normalized and phase-aligned the same way the solver
// reports its result (largest component real positive).
std::vector<cplx> aligned_classical(const qfs::LinearSystem& sys) {
  const auto sol = qfs::classical_solve(sys);
  std::vector<cplx> x(sol.solution.size());
  double norm2 = 0.0;
  for (int i = 0; i < sol.solution.size(); ++i) {
    x[i] = sol.solution(i);
    norm2 += std::norm(x[i]);
  }
  std::size_t arg_max = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] /= std::sqrt(norm2);
    if (std::abs(x[i]) > std::abs(x[arg_max])) arg_max = i;
  }
  const cplx rot = std::conj(x[arg_max]) / std::abs(x[arg_max]);
  for (auto& v : x) v *= rot;
  return x;
}

double overlap_mag(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx o(0, 0);
  for (std::size_t i = 0; i < a.size(); ++i) o += std::conj(a[i]) * b[i];
  return std::abs(o);
}

}  // namespace

TEST_SUITE("hhl") {

TEST_CASE("auto_time_scale fills the signed phase window") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 4.0;
  a(1, 1) = -1.0;
  // tau = 2 pi (2^{t-1} - 1) / (2^t L) with L = 4.
  CHECK(qfs::auto_time_scale(a, 4) ==
        doctest::Approx(2 * kPi * 7 / (16.0 * 4.0)).epsilon(1e-14));
  CHECK(qfs::auto_time_scale(a, 8) ==
        doctest::Approx(2 * kPi * 127 / (256.0 * 4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(qfs::auto_time_scale(a, 1), std::invalid_argument);
  // The chosen tau leaves every eigenvalue phase strictly inside [-1/2, 1/2):
  // max |lambda| tau / 2 pi = (2^{t-1} - 1) / 2^t < 1/2.
  const double tau = qfs::auto_time_scale(a, 4);
  CHECK(4.0 * tau / (2 * kPi) < 0.5);
}

TEST_CASE("diagonal demo solves to the known inverse-weighted state") {
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(diag_demo(), opt);
  CHECK(result.backend == "exact");
  CHECK(result.t == 4);
  CHECK(result.time_scale == doctest::Approx(2 * kPi / 16));
  // x proportional to (1, 1/2, 1/3, 1/4).
  const std::vector<double> expected = {0.8381, 0.4191, 0.2794, 0.2095};
  REQUIRE(result.solution.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::abs(std::abs(result.solution[i]) - expected[i]) < 1e-3);
    CHECK(std::abs(result.solution[i].imag()) < 1e-9);
  }
  // On-grid eigenvalues make the solve numerically exact.
  CHECK(1.0 - overlap_mag(result.solution, aligned_classical(diag_demo())) <
        1e-9);
}

TEST_CASE("ancilla probability equals the inversion amplitude budget") {
  // P(anc = 1) = sum_i |b_i C / lambda_i|^2 with C = 0.9 lambda_unit; for
  // the diagonal demo lambda_unit = 1, so the sum is analytic.
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(diag_demo(), opt);
  double predicted = 0.0;
  for (double lambda : {1.0, 2.0, 3.0, 4.0}) {
    predicted += std::norm(0.5 * 0.9 / lambda);
  }
  CHECK(predicted == doctest::Approx(0.288281).epsilon(1e-4));
  CHECK(result.ancilla_probability ==
        doctest::Approx(predicted).epsilon(1e-9));
  // All phase mass returns to zero after uncompute, so the solution branch
  // carries the whole ancilla-1 probability.
  CHECK(result.branch_probability ==
        doctest::Approx(result.ancilla_probability).epsilon(1e-9));
}

TEST_CASE("basis-conjugated system solves off the diagonal") {
  // A = (H (x) H) diag(1, 2, 3, 4) (H (x) H): same spectrum, dense matrix.
  Eigen::MatrixXd h1(2, 2);
  h1 << 1, 1, 1, -1;
  h1 /= std::sqrt(2.0);
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      h2.block(2 * i, 2 * j, 2, 2) = h1(i, j) * h1;
    }
  }
  Eigen::VectorXd d(4);
  d << 1, 2, 3, 4;
  const Eigen::MatrixXd a = h2 * d.asDiagonal() * h2;
  Eigen::VectorXcd b(4);
  b << 0.0, 1.0, 1.0, 0.0;

  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result =
      qfs::hhl_solve(make_system(a.cast<cplx>(), b), opt);
  // Solution proportional to (3, 5, 5, 3).
  const double n = std::sqrt(9.0 + 25 + 25 + 9);
  const std::vector<double> expected = {3 / n, 5 / n, 5 / n, 3 / n};
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::abs(std::abs(result.solution[i]) - expected[i]) < 1e-3);
  }
}

TEST_CASE("negative eigenvalues read out through two's complement") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  Eigen::VectorXcd b(2);
  b << 1.0, 1.0;
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(make_system(a, b), opt);
  // x proportional to (-1, -1/2); magnitudes (2, 1)/sqrt(5).
  CHECK(std::abs(result.solution[0]) ==
        doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-6));
  CHECK(std::abs(result.solution[1]) ==
        doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-6));
}

TEST_CASE("mixed-sign spectra preserve relative signs in the solution") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = -2.0;
  Eigen::VectorXcd b(2);
  b << 1.0, 1.0;
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(make_system(a, b), opt);
  // x proportional to (1/3, -1/2); aligned so the larger component is
  // positive, the smaller must come out negative.
  CHECK(result.solution[1].real() ==
        doctest::Approx(3 / std::sqrt(13.0)).epsilon(1e-6));
  CHECK(result.solution[0].real() ==
        doctest::Approx(-2 / std::sqrt(13.0)).epsilon(1e-6));
  CHECK(std::abs(result.solution[0].imag()) < 1e-9);
}

TEST_CASE("random on-grid spectra are solved to machine-level accuracy") {
  // Unitaries from QR of random matrices, eigenvalues drawn from the exact
  // phase grid {±1..±7} (lambda_unit = 1 at tau = 2 pi/16, t = 4), so phase
  // estimation is exact and the only error is floating-point.
  qfs::Rng rng(6021);
  for (int trial = 0; trial < 6; ++trial) {
    Eigen::MatrixXcd raw(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        raw(r, c) = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
      }
    }
    const Eigen::MatrixXcd q =
        Eigen::HouseholderQR<Eigen::MatrixXcd>(raw).householderQ();
    Eigen::VectorXd lambda(4);
    for (int i = 0; i < 4; ++i) {
      const int mag = 1 + static_cast<int>(rng.next_u64() % 7);
      lambda(i) = (rng.next_u64() & 1) ? mag : -mag;
    }
    const Eigen::MatrixXcd a =
        q * lambda.cast<cplx>().asDiagonal() * q.adjoint();
    Eigen::VectorXcd b(4);
    for (int i = 0; i < 4; ++i) {
      b(i) = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    }

    qfs::HhlOptions opt;
    opt.t = 4;
    opt.time_scale = 2 * kPi / 16;
    const auto sys = make_system(a, b);
    const auto result = qfs::hhl_solve(sys, opt);
    const auto truth = aligned_classical(sys);
    CAPTURE(trial);
    CHECK(1.0 - overlap_mag(result.solution, truth) < 1e-9);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(std::abs(result.solution[i]) - std::abs(truth[i])) <
            1e-6);
    }
  }
}

TEST_CASE("desk system converges to the classical weights as t grows") {
  const auto sys = build_portfolio_system(bond_equity_spec());
  const auto truth = aligned_classical(sys);
  double previous_err = 2.0;
  double w_bond = 0.0, w_equity = 0.0, panc = 0.0, pbranch = 0.0;
  for (int t = 4; t <= 8; ++t) {
    qfs::HhlOptions opt;
    opt.t = t;  // automatic time scale from the spectral bound
    const auto result = qfs::hhl_solve(sys, opt);
    // Rotate the solver output into the truth's phase frame before taking
    // the distance, so the error measures the physical ray only.
    cplx ov(0, 0);
    for (int i = 0; i < 4; ++i) {
      ov += std::conj(result.solution[i]) * truth[i];
    }
    const cplx rot = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1, 0);
    double err2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      err2 += std::norm(result.solution[i] * rot - truth[i]);
    }
    const double err = std::sqrt(err2);
    CAPTURE(t);
    CHECK(err < previous_err);
    previous_err = err;
    if (t == 8) {
      const double b = std::abs(result.solution[2]);
      const double e = std::abs(result.solution[3]);
      w_bond = b / (b + e);
      w_equity = e / (b + e);
      panc = result.ancilla_probability;
      pbranch = result.branch_probability;
      CHECK(err < 0.005);
    }
  }
  // Frozen t = 8 readouts.
  CHECK(std::abs(w_bond - 0.893736) < 1e-4);
  CHECK(std::abs(w_equity - 0.106264) < 1e-4);
  CHECK(std::abs(panc - 0.000345) < 2e-5);
  CHECK(std::abs(pbranch - 0.000302) < 2e-5);
  // Classical weight ratio 89.56 : 10.44 is approached within 2% relative.
  CHECK(std::abs(w_bond / w_equity - 0.895604 / 0.104396) /
            (0.895604 / 0.104396) <
        0.02);
}

TEST_CASE("sampled solve is deterministic and near the exact magnitudes") {
  qfs::HhlOptions exact_opt;
  exact_opt.t = 4;
  exact_opt.time_scale = 2 * kPi / 16;
  const auto exact = qfs::hhl_solve(diag_demo(), exact_opt);

  qfs::HhlOptions opt = exact_opt;
  opt.sampled = true;
  opt.shots = 8192;
  opt.seed = 7;
  const auto a = qfs::hhl_solve(diag_demo(), opt);
  const auto b = qfs::hhl_solve(diag_demo(), opt);
  CHECK(a.backend == "sampled");
  CHECK(a.shots == 8192);
  REQUIRE(a.solution.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.solution[i] == b.solution[i]);
    // Sampled magnitudes estimate the exact ones; the post-selected branch
    // keeps ~0.29 * 8192 ~ 2400 samples, sigma per amplitude ~ 0.01.
    CHECK(std::abs(std::abs(a.solution[i]) - std::abs(exact.solution[i])) <
          0.05);
  }
  CHECK(a.branch_probability ==
        doctest::Approx(exact.branch_probability).epsilon(0.15));
}

TEST_CASE("input validation and failure modes") {
  // Non-Hermitian matrix.
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, 1.0, 0.0, 1.0;
  Eigen::VectorXcd b(2);
  b << 1.0, 0.0;
  qfs::HhlOptions opt;
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(bad, b), opt),
                  std::invalid_argument);

  Eigen::MatrixXcd ok = Eigen::MatrixXcd::Identity(2, 2);
  // Phase register too small.
  qfs::HhlOptions t1 = opt;
  t1.t = 1;
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(ok, b), t1),
                  std::invalid_argument);
  // Register capacity: t + s + 1 must stay within the simulator limit.
  qfs::HhlOptions huge = opt;
  huge.t = 19;
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(ok, b), huge),
                  std::invalid_argument);
  // rhs size mismatch and zero rhs.
  Eigen::VectorXcd b3 = Eigen::VectorXcd::Ones(3);
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(ok, b3), opt),
                  std::invalid_argument);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(ok, zero), opt),
                  std::invalid_argument);
  // Aliasing time scale: eigenvalue phase on/OUTSIDE the half-open window.
  Eigen::MatrixXcd edge = Eigen::MatrixXcd::Identity(2, 2) * 8.0;
  qfs::HhlOptions alias = opt;
  alias.t = 4;
  alias.time_scale = 2 * kPi / 16;  // 8 * tau / 2pi = 0.5, excluded
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(edge, b), alias),
                  std::invalid_argument);
}

TEST_CASE("near-singular systems abort on vanishing post-selection") {
  // Eigenvalues far below the smallest representable value land in the
  // skipped m = 0 bin; the ancilla never rotates and the solve reports a
  // numerical failure rather than returning noise.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2) * 1e-5;
  Eigen::VectorXcd b(2);
  b << 1.0, 0.0;
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 1.0;
  CHECK_THROWS_AS(qfs::hhl_solve(make_system(a, b), opt),
                  qfs::NumericalError);
}

TEST_CASE("fixed 2x2 reference circuit reproduces frozen readouts") {
  struct Frozen {
    double theta;
    double psel;
    double x0;
    double x1;
  };
  const std::vector<Frozen> table = {
      {kPi / 7, 0.079763185419, 0.982085294058, 0.188436926303},
      {kPi / 6, 0.072650802917, 0.953393781075, 0.301728848817},
      {kPi / 4, 0.061333138186, 0.707106781187, 0.707106781187},
      {kPi / 3, 0.072650802917, 0.301728848817, 0.953393781075},
  };
  for (const auto& row : table) {
    CAPTURE(row.theta);
    const auto result = qfs::hhl_2x2_reference(row.theta);
    CHECK(result.t == 2);
    CHECK(result.time_scale == doctest::Approx(kPi / 2));
    CHECK(result.branch_probability ==
          doctest::Approx(row.psel).epsilon(1e-9));
    REQUIRE(result.solution.size() == 2);
    CHECK(std::abs(result.solution[0]) ==
          doctest::Approx(row.x0).epsilon(1e-9));
    CHECK(std::abs(result.solution[1]) ==
          doctest::Approx(row.x1).epsilon(1e-9));
  }
  CHECK_THROWS_AS(qfs::hhl_2x2_reference(0.0), std::invalid_argument);
  CHECK_THROWS_AS(qfs::hhl_2x2_reference(kPi / 2), std::invalid_argument);
  CHECK_THROWS_AS(qfs::hhl_2x2_reference(-0.3), std::invalid_argument);
}

TEST_CASE("2x2 reference circuit approximates the classical solution") {
  // The r = 2.65 inversion is approximate; the solution still tracks the
  // true normalized solve of [[1.5, .5], [.5, 1.5]] x = (cos, sin) theta.
  for (double theta : {kPi / 7, kPi / 6, kPi / 4, kPi / 3}) {
    qfs::LinearSystem sys;
    sys.matrix = Eigen::MatrixXcd(2, 2);
    sys.matrix << 1.5, 0.5, 0.5, 1.5;
    sys.rhs = Eigen::VectorXcd(2);
    sys.rhs << std::cos(theta), std::sin(theta);
    sys.hermitian = true;
    const auto truth = aligned_classical(sys);
    const auto result = qfs::hhl_2x2_reference(theta);
    CAPTURE(theta);
    CHECK(std::abs(std::abs(result.solution[0]) - std::abs(truth[0])) < 0.02);
    CHECK(std::abs(std::abs(result.solution[1]) - std::abs(truth[1])) < 0.02);
  }
}

TEST_CASE("sampled 2x2 reference stays within shot noise of exact") {
  const auto exact = qfs::hhl_2x2_reference(kPi / 6);
  const auto sampled = qfs::hhl_2x2_reference(kPi / 6, true, 8192, 3);
  CHECK(sampled.backend == "sampled");
  CHECK(std::abs(std::abs(sampled.solution[0]) -
                 std::abs(exact.solution[0])) < 0.05);
  CHECK(std::abs(std::abs(sampled.solution[1]) -
                 std::abs(exact.solution[1])) < 0.05);
  // Determinism.
  const auto again = qfs::hhl_2x2_reference(kPi / 6, true, 8192, 3);
  CHECK(sampled.solution[0] == again.solution[0]);
  CHECK(sampled.ancilla_probability == again.ancilla_probability);
}

TEST_CASE("extract_component reads exact or swap-test magnitudes") {
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(diag_demo(), opt);
  CHECK(qfs::extract_component(result, 0) ==
        doctest::Approx(0.8381).epsilon(1e-3));
  CHECK(qfs::extract_component(result, 3) ==
        doctest::Approx(0.2095).epsilon(1e-3));
  CHECK_THROWS_AS(qfs::extract_component(result, 4), std::invalid_argument);
  CHECK_THROWS_AS(qfs::extract_component(result, -1), std::invalid_argument);
  // Swap-test estimate concentrates on the exact value.
  const double sampled = qfs::extract_component(result, 0, true, 32768, 5);
  CHECK(std::abs(sampled - 0.8381) < 0.02);
}

TEST_CASE("portfolio_similarity measures overlap with a target mix") {
  qfs::HhlOptions opt;
  opt.t = 4;
  opt.time_scale = 2 * kPi / 16;
  const auto result = qfs::hhl_solve(diag_demo(), opt);
  // Overlap with itself is 1.
  CHECK(qfs::portfolio_similarity(result, result.solution) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Overlap with an orthogonal vector is 0.
  std::vector<cplx> orth = {cplx(std::abs(result.solution[1]), 0),
                            cplx(-std::abs(result.solution[0]), 0), 0, 0};
  const double n =
      std::sqrt(std::norm(orth[0]) + std::norm(orth[1]));
  orth[0] /= n;
  orth[1] /= n;
  CHECK(qfs::portfolio_similarity(result, orth) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(
      qfs::portfolio_similarity(result, std::vector<cplx>(2, cplx(1, 0))),
      std::invalid_argument);
  // Sampled overlap via swap test.
  const double sampled =
      qfs::portfolio_similarity(result, result.solution, true, 32768, 2);
  CHECK(std::abs(sampled - 1.0) < 0.02);
}

TEST_CASE("phase estimation concentrates eigenvectors on their grid bin") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = -3.0;
  a(3, 3) = 4.0;
  const double tau = 2 * kPi / 16;
  // Eigenvector of lambda = 2 -> register value m = 2 with probability 1.
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
  e1(1) = 1.0;
  auto probs = qfs::detail::phase_estimation_probabilities(a, e1, 4, tau);
  REQUIRE(probs.size() == 16);
  CHECK(probs[2] == doctest::Approx(1.0).epsilon(1e-10));
  // Negative eigenvalue -3 reads out in two's complement: m = 16 - 3 = 13.
  Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(4);
  e2(2) = 1.0;
  probs = qfs::detail::phase_estimation_probabilities(a, e2, 4, tau);
  CHECK(probs[13] == doctest::Approx(1.0).epsilon(1e-10));
  // A superposition splits its register mass by eigen-component weight.
  Eigen::VectorXcd mix = Eigen::VectorXcd::Zero(4);
  mix(1) = std::sqrt(0.25);
  mix(2) = std::sqrt(0.75);
  probs = qfs::detail::phase_estimation_probabilities(a, mix, 4, tau);
  CHECK(probs[2] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(probs[13] == doctest::Approx(0.75).epsilon(1e-9));
  // Vector length must match.
  Eigen::VectorXcd short_b = Eigen::VectorXcd::Ones(2);
  CHECK_THROWS_AS(
      qfs::detail::phase_estimation_probabilities(a, short_b, 4, tau),
      std::invalid_argument);
}

}  // TEST_SUITE("hhl")
