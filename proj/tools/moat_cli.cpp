#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moat/moat.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const moat::ExperimentConfig config = moat::load_experiment_config(config_path);
  const moat::ExperimentReport report = moat::execute(config);
  std::cout << "wrote " << report.report_path.string() << " (" << report.per_seed.size()
            << " seeds, mean best quality " << moat::format_double(report.mean_best) << ")\n";
  if (report.mean_roi_fraction) {
    std::cout << "mean roi fraction of the final non-dominated subsets: "
              << moat::format_double(*report.mean_roi_fraction) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, int steps) {
  const moat::ExperimentConfig config = moat::load_experiment_config(config_path);
  const auto rows = moat::sweep_weights(config, steps);
  const moat::ProblemDefinition problem = moat::select_problem(config);
  const auto out_dir = moat::resolve_output_dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw moat::IoError("cannot create output directory '" + out_dir.string() + "'");
  const auto path = out_dir / "sweep.csv";
  moat::write_csv_file(path, moat::sweep_to_csv(rows, problem.objectives));
  std::cout << "wrote " << path.string() << " (" << rows.size() << " weight settings)\n";
  return 0;
}

int cmd_budget(int k_max, const std::vector<int>& s_values, const std::string& csv_path) {
  const moat::BudgetTable table = moat::budget_table(k_max, s_values);
  std::cout << moat::budget_table_text(table);
  if (!csv_path.empty()) {
    moat::write_csv_file(csv_path, moat::budget_table_csv(table));
    std::cout << "wrote " << csv_path << "\n";
  }
  return 0;
}

int cmd_front(const std::string& points_path, const std::string& out_path) {
  const moat::CsvTable filtered = moat::front_filter_csv(moat::parse_csv_file(points_path));
  if (out_path.empty()) {
    moat::write_csv(std::cout, filtered);
  } else {
    moat::write_csv_file(out_path, filtered);
    std::cout << "wrote " << out_path << " (" << filtered.rows.size() << " points)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moat - multi-objective assessment toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a configured experiment over all seeds");
  run->add_option("config", config_path, "experiment config (json)")->required();

  std::string sweep_config;
  int steps = 10;
  auto* sweep = app.add_subcommand(
      "sweep-weights", "grid-search the scalarizer per weight setting and record the best point");
  sweep->add_option("config", sweep_config, "experiment config (json)")->required();
  sweep->add_option("--steps", steps, "number of weight steps (records steps-1 interior settings)");

  int k_max = 5;
  std::vector<int> s_values;
  std::string budget_csv;
  auto* budget = app.add_subcommand("budget", "front support-point counts s^(k-1)");
  budget->add_option("--k-max", k_max, "largest objective count")->required();
  budget->add_option("--s", s_values, "points per axis (comma separated)")
      ->required()
      ->delimiter(',');
  budget->add_option("--csv", budget_csv, "also write the table as csv");

  std::string points_path;
  std::string front_out;
  auto* front = app.add_subcommand("front", "non-dominated filter of an arbitrary points csv");
  front->add_option("points", points_path, "csv of points, all columns maximized")->required();
  front->add_option("--out", front_out, "output csv (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*sweep) return cmd_sweep(sweep_config, steps);
    if (*budget) return cmd_budget(k_max, s_values, budget_csv);
    if (*front) return cmd_front(points_path, front_out);
  } catch (const moat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const moat::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
