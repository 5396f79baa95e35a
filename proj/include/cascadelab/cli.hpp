#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cascadelab/cascade.hpp"
#include "cascadelab/filter.hpp"
#include "cascadelab/jumps.hpp"
#include "cascadelab/numfmt.hpp"
#include "cascadelab/serialize.hpp"
#include "cascadelab/transfer.hpp"

namespace cascadelab::cli {

// Exit-code contract: 0 success, 1 validation failure, 2 numeric failure
// (eigensolver / level cap / degenerate case), 3 I/O or argument errors.
enum ExitCode : int { kOk = 0, kValidationFailure = 1, kNumericFailure = 2, kIoFailure = 3 };

struct RunConfig {
  std::string subcommand;
  std::optional<double> theta;  // parsed angle, radians
  std::string filter_path;
  int stages = 8;
  int resolution = 10;
  double tol = kDefaultQmfTol;
  double cluster_tol = kDefaultClusterTol;
  int grid = 21;  // movie frame count
  std::string out;          // empty = stdout
  std::string format = "csv";
};

// Accepts plain radians ("0.7853981") or exact rational multiples of pi
// ("pi/2", "-9pi/20", "2pi", "pi").
inline double parse_theta(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("theta: empty value");

  const std::size_t p = s.find("pi");
  if (p == std::string::npos) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("theta: cannot parse \"" + raw + "\"");
    }
    if (used != s.size()) throw std::invalid_argument("theta: cannot parse \"" + raw + "\"");
    return v;
  }

  const std::string head = s.substr(0, p);
  const std::string tail = s.substr(p + 2);
  long num = 1;
  if (head == "-") {
    num = -1;
  } else if (!head.empty() && head != "+") {
    std::size_t used = 0;
    num = std::stol(head, &used);
    if (used != head.size()) throw std::invalid_argument("theta: cannot parse \"" + raw + "\"");
  }
  long den = 1;
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("theta: cannot parse \"" + raw + "\"");
    std::size_t used = 0;
    den = std::stol(tail.substr(1), &used);
    if (used != tail.size() - 1 || den == 0) {
      throw std::invalid_argument("theta: cannot parse \"" + raw + "\"");
    }
  }
  return static_cast<double>(num) * std::numbers::pi / static_cast<double>(den);
}

inline WaveletFilter resolve_filter(const RunConfig& cfg) {
  const bool has_theta = cfg.theta.has_value();
  const bool has_file = !cfg.filter_path.empty();
  if (has_theta == has_file) {
    throw std::invalid_argument("exactly one of --theta and --filter is required");
  }
  if (has_theta) return theta_family(*cfg.theta);
  return load_filter(cfg.filter_path);
}

namespace detail {

inline int with_output(const RunConfig& cfg, const std::function<void(std::ostream&)>& fn) {
  if (cfg.out.empty()) {
    fn(std::cout);
    return kOk;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) {
    std::cerr << "cannot open output file: " << cfg.out << '\n';
    return kIoFailure;
  }
  fn(os);
  os.flush();
  return os ? kOk : kIoFailure;
}

// Deterministic file token for an angle: "-9pi20" for -9*pi/20, otherwise the
// shortest round-trip decimal.
inline std::string theta_token(double theta, long num = 0, long den = 0) {
  if (den != 0) {
    if (num == 0) return "0";
    const long g = std::gcd(std::abs(num), std::abs(den));
    return std::to_string(num / g) + "pi" + std::to_string(den / g);
  }
  return format_double(theta);
}

}  // namespace detail

inline int cmd_validate(const RunConfig& cfg, std::ostream& os) {
  const WaveletFilter f = resolve_filter(cfg);
  const QmfReport report = f.validate_qmf(cfg.tol);
  if (cfg.format == "json") {
    os << qmf_report_to_json(report).dump(2) << '\n';
  } else {
    const long half = f.degree() / 2;
    for (long l = -half; l <= half; ++l) {
      const double target = (l == 0) ? 1.0 : 0.0;
      const double res = std::abs(f.autocorrelation(-2 * l) - Complex(target));
      os << "orthogonality l=" << l << " residual=" << format_double(res) << '\n';
    }
    Complex sum(0.0);
    for (const Complex& a : f.taps()) sum += a;
    os << "low_pass residual=" << format_double(std::abs(sum - Complex(std::sqrt(2.0)))) << '\n';
    os << (report.ok() ? "OK" : "FAIL") << " (tol=" << format_double(cfg.tol) << ")\n";
  }
  return report.ok() ? kOk : kValidationFailure;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
  const WaveletFilter f = resolve_filter(cfg);
  if (!f.validate_qmf(std::max(cfg.tol, 1e-9)).ok()) {
    std::cerr << "filter does not satisfy the quadrature-mirror conditions\n";
    return kValidationFailure;
  }
  const RuelleMatrix m(f);
  const SpectralReport report = spectrum(m, cfg.cluster_tol);
  json j = spectral_report_to_json(report);
  if (cfg.theta && f.size() == 4) {
    const auto closed = theta_eigenvalues_closed_form(*cfg.theta);
    json cf = json::array();
    for (const Complex& z : closed) cf.push_back({{"re", z.real()}, {"im", z.imag()}});
    j["closed_form"] = cf;
    j["closed_form_max_error"] =
        match_max_error(report.raw, std::vector<Complex>(closed.begin(), closed.end()));
  }
  os << j.dump(2) << '\n';
  return kOk;
}

inline void write_cascade_csv(std::ostream& os, const WaveletFilter& f, int stages) {
  const auto run = cascade_run(f, haar_initial(f), stages, false);
  write_csv(os, run.back());
}

inline int cmd_cascade(const RunConfig& cfg, std::ostream& os) {
  const WaveletFilter f = resolve_filter(cfg);
  const auto stages = cascade_run(f, haar_initial(f), cfg.stages, true);
  json norms = json::array();
  json dists = json::array();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    norms.push_back(stages[i].l2_norm());
    if (i > 0) dists.push_back(l2_distance(stages[i], stages[i - 1]));
  }
  const json sidecar{{"stages", cfg.stages}, {"norms", norms}, {"distances", dists}};

  if (cfg.format == "json") {
    json data = json::array();
    const DyadicStepFunction& last = stages.back();
    for (std::size_t i = 0; i < last.size(); ++i) {
      data.push_back({{"x", last.x_left(i)},
                      {"re", last.values()[i].real()},
                      {"im", last.values()[i].imag()}});
    }
    json j = sidecar;
    j["data"] = data;
    os << j.dump(2) << '\n';
    return kOk;
  }

  write_csv(os, stages.back());
  if (!cfg.out.empty()) {
    std::ofstream side(cfg.out + ".norms.json", std::ios::binary);
    if (!side) {
      std::cerr << "cannot open sidecar file: " << cfg.out << ".norms.json\n";
      return kIoFailure;
    }
    side << sidecar.dump(2) << '\n';
  }
  return kOk;
}

inline int cmd_jumps(const RunConfig& cfg, std::ostream& os) {
  const WaveletFilter f = resolve_filter(cfg);
  OneSidedTrace tr = trace_init(cfg.resolution, f.degree());
  tr = trace_run(f, std::move(tr), cfg.stages, f.size() != 4);
  if (cfg.format == "json") {
    json j{{"resolution", tr.resolution},
           {"stage", tr.stage},
           {"max_jump", max_jump(tr)},
           {"psi_plus", tr.psi_plus},
           {"psi_minus", tr.psi_minus}};
    os << j.dump(2) << '\n';
  } else {
    write_trace_csv(os, tr);
  }
  return kOk;
}

inline int cmd_peaks(const RunConfig& cfg, std::ostream& os) {
  std::vector<double> grid;
  if (cfg.theta) {
    grid.push_back(*cfg.theta);
  } else {
    grid = default_peak_grid();
  }
  const std::vector<PeakRow> rows = peak_table(grid);
  if (cfg.format == "json") {
    json j = json::array();
    for (const PeakRow& r : rows) {
      if (r.degenerate) {
        j.push_back({{"theta", r.theta}, {"degenerate", true}});
      } else {
        j.push_back({{"theta", r.theta}, {"x1", r.at_x1}, {"x15", r.at_x15}, {"x2", r.at_x2}});
      }
    }
    os << j.dump(2) << '\n';
  } else {
    write_peaks_csv(os, rows);
  }
  return kOk;
}

// One CSV frame per angle, written concurrently; frames are independent.
inline int cmd_movie(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const std::string dir = cfg.out.empty() ? "movie" : cfg.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << dir << ": " << ec.message() << '\n';
    return kIoFailure;
  }

  struct Frame {
    double theta;
    std::string token;
  };
  std::vector<Frame> frames;
  if (cfg.theta) {
    frames.push_back({*cfg.theta, detail::theta_token(*cfg.theta)});
  } else {
    if (cfg.grid < 1) throw std::invalid_argument("movie: grid must be >= 1");
    if (cfg.grid == 1) {
      frames.push_back({0.0, detail::theta_token(0.0, 0, 1)});
    } else {
      // theta_j = -pi/2 + j pi/(g-1) = (2j - (g-1)) / (2(g-1)) * pi
      for (int jdx = 0; jdx < cfg.grid; ++jdx) {
        const long num = 2L * jdx - (cfg.grid - 1);
        const long den = 2L * (cfg.grid - 1);
        const double theta = static_cast<double>(num) * std::numbers::pi / static_cast<double>(den);
        frames.push_back({theta, detail::theta_token(theta, num, den)});
      }
    }
  }

  std::vector<std::future<void>> workers;
  workers.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    workers.push_back(std::async(std::launch::async, [&, i] {
      char idx[8];
      std::snprintf(idx, sizeof idx, "%02zu", i);
      const std::string path =
          dir + "/frame_" + idx + "_theta_" + frames[i].token + ".csv";
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot open frame file: " + path);
      write_cascade_csv(os, theta_family(frames[i].theta), cfg.stages);
    }));
  }
  for (auto& w : workers) w.get();
  return kOk;
}

inline int run(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "movie") return cmd_movie(cfg);
    auto dispatch = [&cfg](std::ostream& os) -> int {
      if (cfg.subcommand == "validate") return cmd_validate(cfg, os);
      if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg, os);
      if (cfg.subcommand == "cascade") return cmd_cascade(cfg, os);
      if (cfg.subcommand == "jumps") return cmd_jumps(cfg, os);
      if (cfg.subcommand == "peaks") return cmd_peaks(cfg, os);
      throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
    };
    int rc = kOk;
    const int io_rc = detail::with_output(cfg, [&](std::ostream& os) { rc = dispatch(os); });
    return io_rc != kOk ? io_rc : rc;
  } catch (const EigensolverError& e) {
    std::cerr << e.what() << '\n';
    return kNumericFailure;
  } catch (const LevelCapError& e) {
    std::cerr << e.what() << '\n';
    return kNumericFailure;
  } catch (const DegenerateCaseError& e) {
    std::cerr << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace cascadelab::cli
