#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "cascadelab/filter.hpp"
#include "cascadelab/serialize.hpp"

using namespace cascadelab;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("theta family endpoints") {
  const double r = 1.0 / kSqrt2;

  WaveletFilter f_half = theta_family(kPi / 2);
  CHECK(std::abs(f_half.tap(0) - Complex(r)) < 1e-15);
  CHECK(std::abs(f_half.tap(1)) < 1e-15);
  CHECK(std::abs(f_half.tap(2)) < 1e-15);
  CHECK(std::abs(f_half.tap(3) - Complex(r)) < 1e-15);

  WaveletFilter f_zero = theta_family(0.0);
  CHECK(std::abs(f_zero.tap(0)) < 1e-15);
  CHECK(std::abs(f_zero.tap(1)) < 1e-15);
  CHECK(std::abs(f_zero.tap(2) - Complex(r)) < 1e-15);
  CHECK(std::abs(f_zero.tap(3) - Complex(r)) < 1e-15);

  WaveletFilter f_neg = theta_family(-kPi / 2);
  CHECK(std::abs(f_neg.tap(0)) < 1e-15);
  CHECK(std::abs(f_neg.tap(1) - Complex(r)) < 1e-15);
  CHECK(std::abs(f_neg.tap(2) - Complex(r)) < 1e-15);
  CHECK(std::abs(f_neg.tap(3)) < 1e-15);
}

TEST_CASE("qmf validation") {
  CHECK(WaveletFilter::haar().validate_qmf(1e-12).ok());
  CHECK(theta_family(9 * kPi / 20).validate_qmf(1e-12).ok());

  WaveletFilter bad({Complex(1.0), Complex(0.0)});
  QmfReport report = bad.validate_qmf(1e-12);
  REQUIRE_FALSE(report.ok());
  bool saw_low_pass = false;
  for (const QmfViolation& v : report.violations) {
    if (v.condition == "low_pass") {
      saw_low_pass = true;
      CHECK(v.residual == Catch::Approx(kSqrt2 - 1.0).margin(1e-15));
    }
  }
  CHECK(saw_low_pass);

  WaveletFilter ones({Complex(1.0), Complex(1.0)});
  QmfReport r2 = ones.validate_qmf(1e-12);
  REQUIRE_FALSE(r2.ok());
  // sum_k conj(a_k) a_k = 2 violates the l = 0 relation by 1
  bool saw_orth = false;
  for (const QmfViolation& v : r2.violations) {
    if (v.condition == "orthogonality" && v.shift == 0) {
      saw_orth = true;
      CHECK(v.residual == Catch::Approx(1.0).margin(1e-15));
    }
  }
  CHECK(saw_orth);
}

TEST_CASE("theta family validates over a 101-point grid of (-pi, pi]") {
  for (int i = 1; i <= 101; ++i) {
    const double theta = -kPi + 2.0 * kPi * i / 101.0;
    QmfReport report = theta_family(theta).validate_qmf(1e-12);
    INFO("theta = " << theta);
    CHECK(report.ok());
    CHECK(report.max_residual < 1e-12);
  }
}

TEST_CASE("c_k = sqrt2 a_k pair sums equal one on the theta family") {
  for (int i = 0; i <= 100; ++i) {
    const double theta = -kPi + 2.0 * kPi * i / 100.0;
    WaveletFilter f = theta_family(theta);
    const double c0 = kSqrt2 * f.tap(0).real();
    const double c1 = kSqrt2 * f.tap(1).real();
    const double c2 = kSqrt2 * f.tap(2).real();
    const double c3 = kSqrt2 * f.tap(3).real();
    CHECK(std::abs(c0 + c2 - 1.0) < 1e-12);
    CHECK(std::abs(c1 + c3 - 1.0) < 1e-12);
  }
}

TEST_CASE("m0 evaluation") {
  WaveletFilter haar = WaveletFilter::haar();
  CHECK(std::abs(haar.m0(0.0) - Complex(kSqrt2)) < 1e-15);
  CHECK(std::abs(haar.m0(kPi)) < 1e-15);

  WaveletFilter f = theta_family(kPi / 2);  // m0(z) = (1 + z^3)/sqrt2
  CHECK(std::abs(f.m0(kPi / 3)) < 1e-15);
}

TEST_CASE("qmf identity residual") {
  CHECK(WaveletFilter::haar().qmf_identity_residual(0.7) < 1e-12);
  CHECK(theta_family(kPi / 5).qmf_identity_residual(1.23) < 1e-12);

  WaveletFilter delta({Complex(1.0), Complex(0.0)});
  for (double t : {0.0, 0.9, 2.2}) CHECK(delta.qmf_identity_residual(t) < 1e-15);

  WaveletFilter ones({Complex(1.0), Complex(1.0)});
  CHECK(ones.qmf_identity_residual(0.0) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("qmf identity holds at random frequencies for validated filters") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> freq(0.0, 2.0 * kPi);
  for (int i = 0; i < 10; ++i) {
    WaveletFilter f = theta_family(angle(rng));
    for (int j = 0; j < 100; ++j) CHECK(f.qmf_identity_residual(freq(rng)) < 1e-10);
  }
}

TEST_CASE("theta parameter normalization") {
  CHECK_THROWS_AS(ThetaParameter(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(ThetaParameter(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK(ThetaParameter(3.0 * kPi).radians == Catch::Approx(kPi));
  CHECK(ThetaParameter(0.25).radians == 0.25);
  // 2 pi periodicity of the family itself
  WaveletFilter a = theta_family(0.3);
  WaveletFilter b = theta_family(0.3 + 2.0 * kPi);
  for (long k = 0; k <= 3; ++k) CHECK(std::abs(a.tap(k) - b.tap(k)) < 1e-14);
}

TEST_CASE("filter JSON round trip") {
  WaveletFilter f = theta_family(0.37);
  WaveletFilter g = filter_from_json(filter_to_json(f));
  REQUIRE(g.size() == f.size());
  for (long k = 0; k <= f.degree(); ++k) CHECK(f.tap(k) == g.tap(k));

  WaveletFilter h = filter_from_json(theta_filter_to_json(0.37));
  for (long k = 0; k <= f.degree(); ++k) CHECK(f.tap(k) == h.tap(k));

  CHECK_THROWS_AS(filter_from_json(json::object()), std::invalid_argument);
  CHECK_THROWS_AS(WaveletFilter({Complex(1.0)}), std::invalid_argument);
}
