#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cascadelab/cascade.hpp"
#include "cascadelab/jumps.hpp"

using namespace cascadelab;

namespace {
constexpr double kPi = std::numbers::pi;

// 19 frozen rows of the limiting values at x = 1 and x = 2: theta = k pi/20.
struct FrozenPeak {
  int k;
  double x1, x2;
};
constexpr FrozenPeak kPeakRows[19] = {
    {-9, -5.8531, 6.8531}, {-8, -2.6569, 3.6569}, {-7, -1.5826, 2.5826},
    {-6, -1.0388, 2.0388}, {-5, -0.7071, 1.7071}, {-4, -0.4813, 1.4813},
    {-3, -0.3159, 1.3159}, {-2, -0.1882, 1.1882}, {-1, -0.0854, 1.0854},
    {0, 0.0000, 1.0000},   {1, 0.0730, 0.9270},   {2, 0.1367, 0.8633},
    {3, 0.1936, 0.8064},   {4, 0.2452, 0.7548},   {5, 0.2929, 0.7071},
    {6, 0.3375, 0.6625},   {7, 0.3800, 0.6200},   {8, 0.4208, 0.5792},
    {9, 0.4606, 0.5394}};
}  // namespace

TEST_CASE("trace initialization at resolution 1") {
  OneSidedTrace tr = trace_init(1);
  REQUIRE(tr.points() == 7);
  const double plus[7] = {1, 1, 0, 0, 0, 0, 0};
  const double minus[7] = {0, 1, 1, 0, 0, 0, 0};
  for (int n = 0; n < 7; ++n) {
    CHECK(tr.psi_plus[static_cast<std::size_t>(n)] == plus[n]);
    CHECK(tr.psi_minus[static_cast<std::size_t>(n)] == minus[n]);
  }
  CHECK_THROWS_AS(trace_init(0), std::invalid_argument);
  CHECK_THROWS_AS(trace_init(17), std::invalid_argument);
}

TEST_CASE("tap-count and reality guards") {
  OneSidedTrace tr = trace_init(4, 1);
  CHECK_THROWS_AS(trace_step(WaveletFilter::haar(), tr), std::invalid_argument);
  CHECK_NOTHROW(trace_step(WaveletFilter::haar(), tr, true));

  OneSidedTrace tr3 = trace_init(4, 3);
  WaveletFilter complex4({Complex(0.5), Complex(0, 0.5), Complex(0.5), Complex(0, 0.5)});
  CHECK_THROWS_AS(trace_step(complex4, tr3), std::invalid_argument);
  // degree mismatch between grid and filter
  CHECK_THROWS_AS(trace_step(theta_family(0.4), tr), std::invalid_argument);
}

TEST_CASE("trace agrees with cascade values on the fixed grid") {
  const WaveletFilter f = theta_family(9 * kPi / 20);
  const int res = 6;
  const int stage = 10;
  OneSidedTrace tr = trace_run(f, trace_init(res), stage);
  auto stages = cascade_run(f, haar_initial(f), stage, false);
  const DyadicStepFunction& psi = stages.back();
  const long factor = 1L << (psi.level() - res);
  for (long n = 0; n < tr.points(); ++n) {
    const long grid_index = n * factor;
    const Complex right = psi.at_index(grid_index);
    const Complex left = psi.at_index(grid_index - 1);
    INFO("n = " << n);
    CHECK(std::abs(tr.psi_plus[static_cast<std::size_t>(n)] - right.real()) < 1e-10);
    CHECK(std::abs(tr.psi_minus[static_cast<std::size_t>(n)] - left.real()) < 1e-10);
  }
}

TEST_CASE("shifted-haar angle reaches a fixed point of the sweep") {
  const WaveletFilter f = theta_family(-kPi / 2);
  const int res = 4;
  OneSidedTrace tr = trace_run(f, trace_init(res), res + 1);
  for (int extra = 0; extra < 5; ++extra) {
    OneSidedTrace next = trace_step(f, tr);
    for (std::size_t i = 0; i < next.psi_plus.size(); ++i) {
      CHECK(std::abs(next.psi_plus[i] - tr.psi_plus[i]) < 1e-14);
      CHECK(std::abs(next.psi_minus[i] - tr.psi_minus[i]) < 1e-14);
    }
    tr = std::move(next);
  }
  // the stable pattern is the shifted unit box: right limits 1 on [1, 2)
  const long unit = 1L << res;
  for (long n = 0; n < tr.points(); ++n) {
    const double expect = (n >= unit && n < 2 * unit) ? 1.0 : 0.0;
    CHECK(std::abs(tr.psi_plus[static_cast<std::size_t>(n)] - expect) < 1e-13);
  }
}

TEST_CASE("jump amplitude decays like |sin theta|^m") {
  const double theta = 9 * kPi / 20;
  const WaveletFilter f = theta_family(theta);
  OneSidedTrace tr = trace_run(f, trace_init(8), 200);
  const double j200 = max_jump(tr);
  tr = trace_run(f, std::move(tr), 100);
  const double j300 = max_jump(tr);
  const double rate = std::pow(std::abs(std::sin(theta)), 100);
  CHECK(j300 / j200 == Catch::Approx(rate).epsilon(1e-3));
}

TEST_CASE("max jump is eventually non-increasing under condition E") {
  for (double theta : {kPi / 4, -kPi / 4, 9 * kPi / 20, -9 * kPi / 20}) {
    const WaveletFilter f = theta_family(theta);
    OneSidedTrace tr = trace_init(5);
    std::vector<double> jumps;
    for (int m = 0; m < 200; ++m) {
      tr = trace_step(f, tr);
      jumps.push_back(max_jump(tr));
    }
    // the maximum wanders spatially before the decay regime sets in near m ~ 120
    for (std::size_t m = 130; m + 1 < jumps.size(); ++m) {
      INFO("theta = " << theta << " m = " << m);
      CHECK(jumps[m + 1] <= jumps[m] + 1e-15);
    }
  }
}

TEST_CASE("local update matrix") {
  auto a = local_matrix(theta_family(kPi / 2));
  CHECK(std::abs(a[0][0]) < 1e-15);
  CHECK(a[0][1] == Catch::Approx(1.0).margin(1e-15));
  CHECK(a[1][0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(std::abs(a[1][1]) < 1e-15);

  for (double theta : {-1.1, -0.2, 0.6, 1.3}) {
    auto m = local_matrix(theta_family(theta));
    // rows sum to 1 (from the pairwise tap sums)
    CHECK(m[0][0] + m[0][1] == Catch::Approx(1.0).margin(1e-14));
    CHECK(m[1][0] + m[1][1] == Catch::Approx(1.0).margin(1e-14));
    // eigenpairs: (1, (1,1)) and (-sin theta, (sqrt2 a1, sqrt2 a2))
    const WaveletFilter f = theta_family(theta);
    const double e2x = std::sqrt(2.0) * f.tap(1).real();
    const double e2y = std::sqrt(2.0) * f.tap(2).real();
    const double lambda2 = -std::sin(theta);
    CHECK(m[0][0] * e2x + m[0][1] * e2y == Catch::Approx(lambda2 * e2x).margin(1e-13));
    CHECK(m[1][0] * e2x + m[1][1] * e2y == Catch::Approx(lambda2 * e2y).margin(1e-13));
  }
  CHECK_THROWS_AS(local_matrix(WaveletFilter::haar()), std::invalid_argument);
}

TEST_CASE("local limit closed forms") {
  const double theta = -9 * kPi / 20;
  const WaveletFilter f = theta_family(theta);
  LocalPair at_x1 = local_limit(f, {0.0, 1.0});
  CHECK(at_x1.left == at_x1.right);
  CHECK(at_x1.left == Catch::Approx(-5.8531).margin(5e-5));
  LocalPair at_x2 = local_limit(f, {1.0, 0.0});
  CHECK(at_x2.left == Catch::Approx(6.8531).margin(5e-5));

  // starting on the decaying eigenvector gives the zero limit
  const double e2x = std::sqrt(2.0) * f.tap(1).real();
  const double e2y = std::sqrt(2.0) * f.tap(2).real();
  LocalPair origin = local_limit(f, {e2x, e2y});
  CHECK(std::abs(origin.left) < 1e-12);

  CHECK_THROWS_AS(local_limit(theta_family(kPi / 2), {0.0, 1.0}), DegenerateCaseError);
  CHECK_THROWS_AS(local_limit(theta_family(-kPi / 2), {0.0, 1.0}), DegenerateCaseError);
}

TEST_CASE("local limit equals the iterated matrix") {
  for (double theta : {-1.0, -0.5, 0.0, 0.45, 1.0, 9 * kPi / 20, -9 * kPi / 20}) {
    const WaveletFilter f = theta_family(theta);
    auto a = local_matrix(f);
    // enough iterations to push |sin theta|^k below 1e-13
    const double s = std::abs(std::sin(theta));
    const int k = (s < 0.5) ? 200 : static_cast<int>(std::ceil(std::log(1e-13) / std::log(s)));
    double x = 0.3, y = 1.7;
    for (int i = 0; i < k; ++i) {
      const double nx = a[0][0] * x + a[0][1] * y;
      const double ny = a[1][0] * x + a[1][1] * y;
      x = nx;
      y = ny;
    }
    LocalPair lim = local_limit(f, {0.3, 1.7});
    INFO("theta = " << theta << " iterations " << k);
    CHECK(std::abs(x - lim.left) < 1e-9);
    CHECK(std::abs(y - lim.right) < 1e-9);
  }
}

TEST_CASE("three-cell matrix carries the extra growth eigenvalue") {
  const WaveletFilter f = theta_family(kPi / 4);
  auto a3 = local_matrix_3(f);
  const double growth = std::sqrt(2.0) * f.tap(3).real();
  CHECK(growth == Catch::Approx((1.0 + std::sqrt(2.0)) / 2.0).margin(1e-12));
  CHECK(growth > 1.0);
  // eigenvector (1, 0, 0)
  CHECK(a3[0][0] == Catch::Approx(growth).margin(1e-15));
  CHECK(a3[1][0] == 0.0);
  CHECK(a3[2][0] == 0.0);
  // the trailing 2x2 block is the two-cell matrix
  auto a2 = local_matrix(f);
  CHECK(a3[1][1] == a2[0][0]);
  CHECK(a3[1][2] == a2[0][1]);
  CHECK(a3[2][1] == a2[1][0]);
  CHECK(a3[2][2] == a2[1][1]);

  CHECK(std::sqrt(2.0) * theta_family(0.0).tap(3).real() == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("third-cell values grow without bound when sqrt2 a3 > 1") {
  const WaveletFilter f = theta_family(kPi / 4);
  auto a3 = local_matrix_3(f);
  double v[3] = {1.0, 0.0, 1.0};
  double prev = std::abs(v[0]);
  for (int i = 0; i < 40; ++i) {
    double n0 = a3[0][0] * v[0] + a3[0][1] * v[1] + a3[0][2] * v[2];
    double n1 = a3[1][1] * v[1] + a3[1][2] * v[2];
    double n2 = a3[2][1] * v[1] + a3[2][2] * v[2];
    v[0] = n0; v[1] = n1; v[2] = n2;
  }
  CHECK(std::abs(v[0]) > 100.0 * prev);
}

TEST_CASE("peak table matches the frozen rows") {
  auto grid = default_peak_grid();
  REQUIRE(grid.size() == 19);
  auto rows = peak_table(grid);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE_FALSE(rows[i].degenerate);
    INFO("k = " << kPeakRows[i].k);
    CHECK(rows[i].theta == Catch::Approx(kPeakRows[i].k * kPi / 20.0).margin(1e-15));
    CHECK(std::abs(rows[i].at_x1 - kPeakRows[i].x1) < 1.01e-4);
    CHECK(rows[i].at_x15 == 0.0);
    CHECK(std::abs(rows[i].at_x2 - kPeakRows[i].x2) < 1.01e-4);
    CHECK(rows[i].at_x1 + rows[i].at_x2 == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("peak table marks degenerate angles") {
  const double grid[3] = {kPi / 2, -kPi / 2, 0.25};
  auto rows = peak_table(std::span<const double>(grid, 3));
  CHECK(rows[0].degenerate);
  CHECK(rows[1].degenerate);
  CHECK_FALSE(rows[2].degenerate);
}

TEST_CASE("peak values agree with the local limit route") {
  for (const FrozenPeak& row : kPeakRows) {
    const double theta = row.k * kPi / 20.0;
    const WaveletFilter f = theta_family(theta);
    auto table = peak_table(std::span<const double>(&theta, 1));
    LocalPair x1 = local_limit(f, {0.0, 1.0});
    LocalPair x2 = local_limit(f, {1.0, 0.0});
    CHECK(table[0].at_x1 == Catch::Approx(x1.left).margin(1e-12));
    CHECK(table[0].at_x2 == Catch::Approx(x2.left).margin(1e-12));
  }
}

TEST_CASE("high-stage cascade approaches the peak limits") {
  // the approach rate is |sin theta|^n, so pick an angle well inside the range
  const double theta = -kPi / 5;
  const WaveletFilter f = theta_family(theta);
  auto stages = cascade_run(f, haar_initial(f), 18, false);
  const DyadicStepFunction& psi = stages.back();
  // left limits at x = 1 and x = 2 are the cells ending there
  const long cells = 1L << psi.level();
  const double at1 = psi.at_index(cells - 1).real();
  const double at2 = psi.at_index(2 * cells - 1).real();
  auto rows = peak_table(std::span<const double>(&theta, 1));
  CHECK(std::abs(at1 - rows[0].at_x1) < 1e-3);
  CHECK(std::abs(at2 - rows[0].at_x2) < 1e-3);
}

TEST_CASE("trace csv shape") {
  OneSidedTrace tr = trace_init(2);
  std::ostringstream os;
  write_trace_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,x,psi_plus,psi_minus,jump");
  int count = 0;
  while (std::getline(is, line)) ++count;
  CHECK(count == tr.points());
}
