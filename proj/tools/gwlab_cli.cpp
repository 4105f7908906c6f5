#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gwlab/acceptance.hpp"
#include "gwlab/commands.hpp"
#include "gwlab/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAcceptance = 2;

int default_threads() {
  if (const char* env = std::getenv("GWLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 0;
}

void add_model_options(CLI::App* sub, gwlab::RunConfig& cfg, std::string& model, int& case_number) {
  sub->add_option("--model", model, "model JSON file")->check(CLI::ExistingFile);
  sub->add_option("--case", case_number, "built-in archetype 1..5, or the expected case of --model");
  sub->add_option("--seed", cfg.seed, "master seed");
  sub->add_option("--out", cfg.out_dir, "output directory (files are never overwritten)");
}

void add_sampling(CLI::App* sub, std::string& sampling) {
  sub->add_option("--sampling", sampling, "aggregate or per-individual")
      ->check(CLI::IsMember({"aggregate", "per-individual"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification of critical decomposable two-type branching processes with immigration"};
  app.set_version_flag("--version", gwlab::tool_version());
  app.require_subcommand(1);

  gwlab::RunConfig cfg;
  cfg.threads = default_threads();
  std::string model;
  int case_number = 0;
  std::string sampling = "aggregate";
  int coordinate = 0;

  auto* simulate = app.add_subcommand("simulate", "simulate paths and write paths.csv");
  add_model_options(simulate, cfg, model, case_number);
  simulate->add_option("--k", cfg.k, "horizon");
  simulate->add_option("--reps", cfg.reps, "number of paths");
  add_sampling(simulate, sampling);

  auto* moments = app.add_subcommand("moments", "exact means and covariances up to --k");
  add_model_options(moments, cfg, model, case_number);
  moments->add_option("--k", cfg.k, "horizon");

  auto* stationary = app.add_subcommand("stationary", "stationary law of a subcritical coordinate");
  add_model_options(stationary, cfg, model, case_number);
  stationary->add_option("--N", cfg.N, "largest support point reported");
  stationary->add_option("--M", cfg.M, "number of transform points (>= 2N)");
  stationary->add_option("--coordinate", coordinate, "coordinate of a two-type model (1 or 2)");

  auto* limit = app.add_subcommand("limit", "simulate limit processes and evaluate transforms");
  add_model_options(limit, cfg, model, case_number);
  limit->add_option("--paths", cfg.paths, "number of limit paths");
  limit->add_option("--T", cfg.T, "time horizon");
  limit->add_option("--dt", cfg.dt, "Euler step");

  auto* experiment = app.add_subcommand("experiment", "compare scaled simulations with the limit theory");
  add_model_options(experiment, cfg, model, case_number);
  experiment->add_option("--n", cfg.n_list, "scaling parameters")->delimiter(',');
  experiment->add_option("--reps", cfg.reps, "replicates per n");
  experiment->add_option("--grid", cfg.grid, "time grid")->delimiter(',');
  experiment->add_option("--limit-paths", cfg.limit_paths, "limit reference paths");
  experiment->add_option("--dt", cfg.dt, "Euler step for limit references");
  experiment->add_option("--N", cfg.N, "stationary support size");
  experiment->add_option("--M", cfg.M, "stationary transform points");
  add_sampling(experiment, sampling);

  gwlab::AcceptanceOptions acceptance;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--seed", acceptance.seed, "master seed");
  verify->add_option("--only", acceptance.only, "criterion ids to run")->delimiter(',');

  for (auto* sub : {simulate, moments, stationary, limit, experiment, verify})
    sub->add_option("--threads", cfg.threads, "worker threads (default: GWLAB_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gwlab: argument error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (verify->parsed()) {
      acceptance.threads = cfg.threads;
      int failed = 0;
      gwlab::run_acceptance(acceptance, [&](const gwlab::CriterionResult& r) {
        std::printf("%s\n", gwlab::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
      });
      std::printf("verify: %d criteria failed\n", failed);
      return failed == 0 ? kExitOk : kExitAcceptance;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!model.empty()) cfg.model_path = model;
    if (case_number != 0) cfg.case_number = case_number;
    if (coordinate != 0) cfg.coordinate = coordinate;
    cfg.sampling = sampling == "aggregate" ? gwlab::SamplingMode::Aggregate : gwlab::SamplingMode::PerIndividual;

    const gwlab::CommandResult result = gwlab::run_command(cfg);
    gwlab::write_outputs(cfg.out_dir, result.files);
    std::printf("%s\n", result.summary.c_str());
    for (const auto& f : result.files) std::printf("wrote %s/%s\n", cfg.out_dir.c_str(), f.name.c_str());
    return result.exit_code;
  } catch (const gwlab::ValidationError& e) {
    std::cerr << "gwlab: invalid input: " << e.what() << "\n";
  } catch (const gwlab::OverflowError& e) {
    std::cerr << "gwlab: overflow: " << e.what() << "\n";
  } catch (const gwlab::BudgetError& e) {
    std::cerr << "gwlab: budget exceeded: " << e.what() << "\n";
  } catch (const gwlab::ConvergenceError& e) {
    std::cerr << "gwlab: no convergence: " << e.what() << "\n";
  } catch (const gwlab::Error& e) {
    std::cerr << "gwlab: error: " << e.what() << "\n";
  }
  return kExitValidation;
}
