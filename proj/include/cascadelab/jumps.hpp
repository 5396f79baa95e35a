#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascadelab/filter.hpp"
#include "cascadelab/numfmt.hpp"

namespace cascadelab {

struct DegenerateCaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One-sided limits of a cascade iterate at the fixed dyadic grid n 2^{-N},
// n = 0 .. degree * 2^N.  Out-of-range reads are zero.
struct OneSidedTrace {
  int resolution = 1;  // N
  long degree = 3;     // filter degree; grid spans [0, degree]
  int stage = 0;
  std::vector<double> psi_plus, psi_minus;

  long points() const { return degree * (1L << resolution) + 1; }
};

inline OneSidedTrace trace_init(int resolution, long degree = 3) {
  if (resolution < 1 || resolution > 16) {
    throw std::invalid_argument("trace_init: resolution must be in [1, 16]");
  }
  if (degree < 1) throw std::invalid_argument("trace_init: degree must be >= 1");
  OneSidedTrace tr;
  tr.resolution = resolution;
  tr.degree = degree;
  const long n_unit = 1L << resolution;
  const long len = degree * n_unit + 1;
  tr.psi_plus.assign(static_cast<std::size_t>(len), 0.0);
  tr.psi_minus.assign(static_cast<std::size_t>(len), 0.0);
  for (long n = 0; n < n_unit; ++n) tr.psi_plus[static_cast<std::size_t>(n)] = 1.0;
  for (long n = 1; n <= n_unit; ++n) tr.psi_minus[static_cast<std::size_t>(n)] = 1.0;
  return tr;
}

// One sweep of psi(n) <- sqrt(2) sum_k a_k psi(2n - k 2^N) on both arrays.
// The default mode insists on the 4-tap case; pass generalized = true to run
// the same stencil for any tap count.
inline OneSidedTrace trace_step(const WaveletFilter& f, const OneSidedTrace& tr,
                                bool generalized = false) {
  if (!generalized && f.size() != 4) {
    throw std::invalid_argument("trace_step: expected a 4-tap filter (use generalized mode)");
  }
  if (!f.is_real(1e-14)) throw std::invalid_argument("trace_step: filter must be real");
  if (f.degree() != tr.degree) {
    throw std::invalid_argument("trace_step: filter degree does not match the trace grid");
  }
  const long n_unit = 1L << tr.resolution;
  const long len = tr.points();
  OneSidedTrace out = tr;
  out.stage = tr.stage + 1;
  const double sq2 = std::sqrt(2.0);
  for (auto [src, dst] : {std::pair{&tr.psi_plus, &out.psi_plus},
                          std::pair{&tr.psi_minus, &out.psi_minus}}) {
    for (long n = 0; n < len; ++n) {
      double acc = 0.0;
      for (long k = 0; k <= tr.degree; ++k) {
        const long j = 2 * n - k * n_unit;
        if (j < 0 || j >= len) continue;
        acc += f.tap(k).real() * (*src)[static_cast<std::size_t>(j)];
      }
      (*dst)[static_cast<std::size_t>(n)] = sq2 * acc;
    }
  }
  return out;
}

inline OneSidedTrace trace_run(const WaveletFilter& f, OneSidedTrace tr, int stages,
                               bool generalized = false) {
  for (int i = 0; i < stages; ++i) tr = trace_step(f, tr, generalized);
  return tr;
}

inline double max_jump(const OneSidedTrace& tr) {
  double m = 0.0;
  for (std::size_t i = 0; i < tr.psi_plus.size(); ++i) {
    m = std::max(m, std::abs(tr.psi_plus[i] - tr.psi_minus[i]));
  }
  return m;
}

namespace detail {

inline void require_four_real_taps(const WaveletFilter& f, const char* who) {
  if (f.size() != 4) throw std::invalid_argument(std::string(who) + ": expected a 4-tap filter");
  if (!f.is_real(1e-14)) throw std::invalid_argument(std::string(who) + ": filter must be real");
}

}  // namespace detail

// Update matrix for the two constant values on adjacent cells left of a
// dyadic point: A = [[sqrt2 a2, sqrt2 a0], [sqrt2 a3, sqrt2 a1]].
inline std::array<std::array<double, 2>, 2> local_matrix(const WaveletFilter& f) {
  detail::require_four_real_taps(f, "local_matrix");
  const double s = std::sqrt(2.0);
  return {{{s * f.tap(2).real(), s * f.tap(0).real()},
           {s * f.tap(3).real(), s * f.tap(1).real()}}};
}

// Same iteration carried on three adjacent cells; the extra eigenvalue is
// sqrt2 a3 with eigenvector (1, 0, 0).
inline std::array<std::array<double, 3>, 3> local_matrix_3(const WaveletFilter& f) {
  detail::require_four_real_taps(f, "local_matrix_3");
  const double s = std::sqrt(2.0);
  return {{{s * f.tap(3).real(), s * f.tap(1).real(), 0.0},
           {0.0, s * f.tap(2).real(), s * f.tap(0).real()},
           {0.0, s * f.tap(3).real(), s * f.tap(1).real()}}};
}

struct LocalPair {
  double left;   // value on the second cell to the left of the point
  double right;  // value on the cell adjacent to the point
};

// n -> infinity limit of A^n (s1, s2): both components equal
// (sqrt2 a2 s1 - sqrt2 a1 s2) / (sqrt2 (a2 - a1)).  The second eigenvalue of
// A is -sin(theta) for the 4-tap family; the formula degenerates when it hits
// the unit circle.
inline LocalPair local_limit(const WaveletFilter& f, LocalPair start) {
  detail::require_four_real_taps(f, "local_limit");
  const double s = std::sqrt(2.0);
  const double sin_equiv = 1.0 - s * (f.tap(1).real() + f.tap(2).real());
  if (std::abs(sin_equiv - 1.0) < 1e-9 || std::abs(sin_equiv + 1.0) < 1e-9) {
    throw DegenerateCaseError("local_limit: no limit formula at sin(theta) = +-1");
  }
  const double value =
      (s * f.tap(2).real() * start.left - s * f.tap(1).real() * start.right) /
      (s * (f.tap(2).real() - f.tap(1).real()));
  return {value, value};
}

struct PeakRow {
  double theta = 0.0;
  bool degenerate = false;
  double at_x1 = 0.0;    // limit value at x = 1
  double at_x15 = 0.0;   // limit value at x = 3/2 (always 0)
  double at_x2 = 0.0;    // limit value at x = 2
};

// Closed-form limits of the cascade iterates at x = 1, 3/2, 2 over a list of
// angles; x1 = (1 + tan((theta - pi/2)/2))/2 and x2 = 1 - x1.
inline std::vector<PeakRow> peak_table(std::span<const double> thetas) {
  std::vector<PeakRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas) {
    PeakRow row;
    row.theta = theta;
    const double sin_t = std::sin(theta);
    if (std::abs(sin_t - 1.0) < 1e-9 || std::abs(sin_t + 1.0) < 1e-9) {
      row.degenerate = true;
    } else {
      const double half_tan = std::tan(0.5 * (theta - 0.5 * std::numbers::pi));
      row.at_x1 = 0.5 * (1.0 + half_tan);
      row.at_x15 = 0.0;
      row.at_x2 = 0.5 * (1.0 - half_tan);
    }
    rows.push_back(row);
  }
  return rows;
}

// The 19 angles k pi/20, k = -9..9.
inline std::vector<double> default_peak_grid() {
  std::vector<double> g;
  for (int k = -9; k <= 9; ++k) g.push_back(static_cast<double>(k) * std::numbers::pi / 20.0);
  return g;
}

inline void write_trace_csv(std::ostream& os, const OneSidedTrace& tr) {
  os << "n,x,psi_plus,psi_minus,jump\n";
  const double h = std::ldexp(1.0, -tr.resolution);
  for (long n = 0; n < tr.points(); ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    os << n << ',' << format_double(static_cast<double>(n) * h) << ','
       << format_double(tr.psi_plus[i]) << ',' << format_double(tr.psi_minus[i]) << ','
       << format_double(tr.psi_plus[i] - tr.psi_minus[i]) << '\n';
  }
}

// Four-decimal table formatting; degenerate rows keep their value cells empty.
inline void write_peaks_csv(std::ostream& os, const std::vector<PeakRow>& rows) {
  os << "theta,x1,x15,x2\n";
  for (const PeakRow& r : rows) {
    os << format_double(r.theta) << ',';
    if (r.degenerate) {
      os << ",,\n";
    } else {
      os << format_fixed(r.at_x1, 4) << ',' << format_fixed(r.at_x15, 4) << ','
         << format_fixed(r.at_x2, 4) << '\n';
    }
  }
}

}  // namespace cascadelab
