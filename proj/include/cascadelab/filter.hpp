#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascadelab/laurent.hpp"

namespace cascadelab {

inline constexpr double kDefaultQmfTol = 1e-12;

// Angle in radians, normalized to (-pi, pi].
struct ThetaParameter {
  double radians;

  explicit ThetaParameter(double r) {
    if (!std::isfinite(r)) throw std::invalid_argument("ThetaParameter: angle must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    radians = std::remainder(r, two_pi);
    if (radians <= -std::numbers::pi) radians += two_pi;
  }
};

struct QmfViolation {
  std::string condition;  // "orthogonality" (with shift) or "low_pass"
  long shift;             // orthogonality shift l; 0 for the low-pass sum
  double residual;
};

struct QmfReport {
  std::vector<QmfViolation> violations;
  double max_residual = 0.0;
  double tol = kDefaultQmfTol;

  bool ok() const { return violations.empty(); }
};

// Finite low-pass filter a_0..a_N, N >= 1.  Immutable value type.
class WaveletFilter {
 public:
  explicit WaveletFilter(std::vector<Complex> taps, std::string name = "")
      : taps_(std::move(taps)), name_(std::move(name)) {
    if (taps_.size() < 2) throw std::invalid_argument("WaveletFilter: need at least 2 taps");
  }

  static WaveletFilter haar() {
    const double r = 1.0 / std::sqrt(2.0);
    return WaveletFilter({Complex(r), Complex(r)}, "haar");
  }

  std::size_t size() const { return taps_.size(); }
  long degree() const { return static_cast<long>(taps_.size()) - 1; }  // index bound N
  const std::vector<Complex>& taps() const { return taps_; }
  const std::string& name() const { return name_; }

  Complex tap(long k) const {
    if (k < 0 || k > degree()) return Complex(0.0);
    return taps_[static_cast<std::size_t>(k)];
  }

  bool is_real(double tol = 0.0) const {
    for (const Complex& a : taps_) {
      if (std::abs(a.imag()) > tol) return false;
    }
    return true;
  }

  // m0(e^{-it}) = sum_k a_k e^{-ikt}
  Complex m0(double t) const {
    Complex acc(0.0);
    for (long k = 0; k <= degree(); ++k) {
      acc += taps_[static_cast<std::size_t>(k)] * std::polar(1.0, -static_cast<double>(k) * t);
    }
    return acc;
  }

  LaurentPolynomial symbol() const { return LaurentPolynomial(0, taps_); }

  // gamma(s) = sum_j conj(a_j) a_{j-s}
  Complex autocorrelation(long s) const {
    Complex acc(0.0);
    for (long j = 0; j <= degree(); ++j) {
      if (j - s < 0 || j - s > degree()) continue;
      acc += std::conj(taps_[static_cast<std::size_t>(j)]) * taps_[static_cast<std::size_t>(j - s)];
    }
    return acc;
  }

  // | |m0(t)|^2 + |m0(t+pi)|^2 - 2 |
  double qmf_identity_residual(double t) const {
    return std::abs(std::norm(m0(t)) + std::norm(m0(t + std::numbers::pi)) - 2.0);
  }

  // Residuals of the tap orthogonality relations and the low-pass sum.
  QmfReport validate_qmf(double tol = kDefaultQmfTol) const {
    if (tol < 0) throw std::invalid_argument("validate_qmf: tol must be nonnegative");
    QmfReport report;
    report.tol = tol;
    const long half = degree() / 2;
    for (long l = -half; l <= half; ++l) {
      const double target = (l == 0) ? 1.0 : 0.0;
      const double res = std::abs(autocorrelation(-2 * l) - Complex(target));
      report.max_residual = std::max(report.max_residual, res);
      if (res > tol) report.violations.push_back({"orthogonality", l, res});
    }
    Complex sum(0.0);
    for (const Complex& a : taps_) sum += a;
    const double low_pass_res = std::abs(sum - Complex(std::sqrt(2.0)));
    report.max_residual = std::max(report.max_residual, low_pass_res);
    if (low_pass_res > tol) report.violations.push_back({"low_pass", 0, low_pass_res});
    return report;
  }

 private:
  std::vector<Complex> taps_;
  std::string name_;
};

// The one-parameter family of 4-tap low-pass filters
//   a_k = (1 +- cos(theta) +- sin(theta)) / (2 sqrt 2).
inline WaveletFilter theta_family(ThetaParameter theta) {
  const double c = std::cos(theta.radians);
  const double s = std::sin(theta.radians);
  const double f = 1.0 / (2.0 * std::sqrt(2.0));
  return WaveletFilter(
      {Complex(f * (1.0 - c + s)), Complex(f * (1.0 - c - s)), Complex(f * (1.0 + c - s)),
       Complex(f * (1.0 + c + s))},
      "theta_family");
}

inline WaveletFilter theta_family(double theta_radians) {
  return theta_family(ThetaParameter(theta_radians));
}

}  // namespace cascadelab
