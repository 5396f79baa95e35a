#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "cascadelab/cli.hpp"

int run_app(int argc, char** argv) {
  CLI::App app{"cascadelab: transfer-operator spectra, cascade iterations and jump"
               " traces for finite wavelet low-pass filters"};
  app.require_subcommand(1);

  cascadelab::cli::RunConfig cfg;
  std::string theta_str;

  auto add_common = [&](CLI::App* sub, bool filter_source) {
    if (filter_source) {
      sub->add_option("--theta", theta_str, "angle in radians or a rational multiple of pi"
                                            " (e.g. pi/2, -9pi/20)");
      sub->add_option("--filter", cfg.filter_path, "JSON filter file");
    }
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
    sub->add_option("--format", cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", cfg.tol, "validation tolerance");
    return sub;
  };

  CLI::App* validate = add_common(app.add_subcommand("validate", "check the quadrature-mirror"
                                                                 " and low-pass conditions"),
                                  true);
  CLI::App* spectrum = add_common(app.add_subcommand("spectrum", "eigenvalues of the transfer"
                                                                 " operator matrix"),
                                  true);
  spectrum->add_option("--cluster-tol", cfg.cluster_tol, "eigenvalue clustering tolerance");
  CLI::App* cascade = add_common(app.add_subcommand("cascade", "run the cascade iteration from"
                                                               " the unit box"),
                                 true);
  cascade->add_option("--stages", cfg.stages, "number of refinement stages");
  CLI::App* jumps = add_common(app.add_subcommand("jumps", "one-sided-limit trace at a fixed"
                                                           " dyadic resolution"),
                               true);
  jumps->add_option("--stages", cfg.stages, "number of sweeps");
  jumps->add_option("--resolution", cfg.resolution, "dyadic resolution exponent N (grid 2^-N)");
  CLI::App* movie = add_common(app.add_subcommand("movie", "cascade frames over a grid of"
                                                           " angles (out is a directory)"),
                               false);
  movie->add_option("--theta", theta_str, "single frame at this angle instead of the grid");
  movie->add_option("--stages", cfg.stages, "refinement stages per frame");
  movie->add_option("--grid", cfg.grid, "number of frames across [-pi/2, pi/2]");
  CLI::App* peaks = add_common(app.add_subcommand("peaks", "closed-form limit values at"
                                                           " x = 1, 3/2, 2"),
                               false);
  peaks->add_option("--theta", theta_str, "single angle instead of the 19-row grid");
  (void)validate;
  (void)cascade;
  (void)peaks;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!theta_str.empty()) {
    try {
      cfg.theta = cascadelab::cli::parse_theta(theta_str);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return cascadelab::cli::kIoFailure;
    }
  }
  return cascadelab::cli::run(cfg);
}

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return cascadelab::cli::kIoFailure;
  }
}
