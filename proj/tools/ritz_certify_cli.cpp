#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ritz/experiments.hpp"

namespace {

void announce(const std::string& path) { std::cout << "wrote " << path << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified a-posteriori error bounds for Rayleigh-Ritz eigenpairs"};
  app.require_subcommand(1);

  std::string matrix_path, basis_path, out_dir = ".";
  std::string mode_str = "exact";
  auto* bounds = app.add_subcommand(
      "bounds", "Gap table and bound report for a matrix and a trial basis");
  bounds->add_option("--matrix", matrix_path, "square symmetric matrix (.mtx/.mm or CSV)")
      ->required();
  bounds->add_option("--basis", basis_path, "trial basis, CSV with one row per ambient index")
      ->required();
  bounds->add_option("--mode", mode_str, "gap mode: exact (oracle-backed) or estimated")
      ->check(CLI::IsMember({"exact", "estimated"}));
  bounds->add_option("--out", out_dir, "output directory");

  auto* exp = app.add_subcommand("experiment", "Reproducible experiment drivers");
  exp->require_subcommand(1);

  ritz::Fig2Config fig2_cfg;
  auto* fig2 = exp->add_subcommand("fig2", "two-cluster model, bounds vs residual scale");
  fig2->add_option("--gap", fig2_cfg.gap, "planted Ritz value separation");
  fig2->add_option("--trials", fig2_cfg.trials, "random trials per residual level");
  fig2->add_option("--seed", fig2_cfg.seed, "random seed");
  fig2->add_option("--out", fig2_cfg.out_dir, "output directory");

  ritz::LaplacianConfig lap_cfg;
  auto* lap = exp->add_subcommand("laplacian", "block iteration on the 1D Laplacian");
  lap->add_option("--n", lap_cfg.n, "matrix dimension");
  lap->add_option("--k", lap_cfg.k, "block size");
  lap->add_option("--iters", lap_cfg.iters, "iterations");
  lap->add_option("--seed", lap_cfg.seed, "random seed");
  lap->add_option("--out", lap_cfg.out_dir, "output directory");

  ritz::SvdExpConfig svd_cfg;
  auto* svd = exp->add_subcommand("svd", "singular subspace bounds vs sketch quality");
  svd->add_option("--seed", svd_cfg.seed, "random seed");
  svd->add_option("--out", svd_cfg.out_dir, "output directory");

  ritz::SturmConfig sturm_cfg;
  auto* sturm = exp->add_subcommand("sturm", "boundary-value operator convergence study");
  sturm->add_option("--kmax", sturm_cfg.kmax, "largest trial degree (2..12)");
  sturm->add_option("--out", sturm_cfg.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (bounds->parsed()) {
      ritz::GapMode mode =
          mode_str == "exact" ? ritz::GapMode::Exact : ritz::GapMode::Estimated;
      auto res = ritz::bounds_on_file(matrix_path, basis_path, mode, out_dir);
      announce(res.gaps_path);
      announce(res.bounds_path);
      announce(res.ritz_path);
    } else if (fig2->parsed()) {
      auto res = ritz::run_fig2(fig2_cfg);
      announce(res.csv_path);
      announce(res.svg_path);
    } else if (lap->parsed()) {
      auto res = ritz::run_laplacian(lap_cfg);
      announce(res.csv_path);
      announce(res.svg_path);
    } else if (svd->parsed()) {
      auto res = ritz::run_svd_experiment(svd_cfg);
      announce(res.csv_path);
      announce(res.svg_path);
    } else if (sturm->parsed()) {
      auto res = ritz::run_sturm(sturm_cfg);
      announce(res.csv_path);
      for (const auto& p : res.sample_paths) announce(p);
      announce(res.svg_path);
    }
    return 0;
  } catch (const ritz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ritz::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
