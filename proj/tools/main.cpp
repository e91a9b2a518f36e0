#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lfd/csv.hpp"
#include "lfd/metrics.hpp"
#include "lfd/model.hpp"
#include "lfd/pipeline.hpp"

namespace {

namespace fs = std::filesystem;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LFD_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 0;
}

std::vector<double> parse_number_list(const std::string& text,
                                      const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("cannot parse ") + what + " '" +
                               field + "'");
    }
  }
  if (values.empty()) {
    throw std::runtime_error(std::string("empty ") + what + " list");
  }
  return values;
}

Eigen::VectorXd parse_joint_vector(const std::string& text, int dof,
                                   const char* what) {
  const std::vector<double> values = parse_number_list(text, what);
  if (static_cast<int>(values.size()) != dof) {
    throw std::runtime_error(std::string(what) + " needs " +
                             std::to_string(dof) + " values, got " +
                             std::to_string(values.size()));
  }
  Eigen::VectorXd v(dof);
  for (int i = 0; i < dof; ++i) v[i] = values[i];
  return v;
}

void write_trace(const lfd::OptimizeResult& result, const fs::path& path) {
  std::ostringstream out;
  out << "iteration,alpha_z,n_basis,value,best\n";
  for (std::size_t i = 0; i < result.evaluations.size(); ++i) {
    const auto& eval = result.evaluations[i];
    out << (i + 1) << "," << lfd::format_double(eval.alpha_z) << ","
        << eval.n_basis << "," << lfd::format_double(eval.value) << ","
        << lfd::format_double(result.best_so_far[i]) << "\n";
  }
  lfd::write_file_atomic(path, out.str());
}

std::string evaluation_csv(const std::vector<lfd::EvaluationRow>& rows) {
  std::ostringstream out;
  out << "noise_deg,reps,gmcc_mean,gmcc_std,joint_error_mean,joint_error_std\n";
  for (const auto& row : rows) {
    out << lfd::format_double(row.noise_deg) << "," << row.reps << ","
        << lfd::format_double(row.gmcc_mean) << ","
        << lfd::format_double(row.gmcc_std) << ","
        << lfd::format_double(row.joint_error_mean) << ","
        << lfd::format_double(row.joint_error_std) << "\n";
  }
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Learning joint-space motions from demonstrations"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic demonstration set");
  std::string synth_out;
  lfd::SynthSpec spec;
  spec.seed = default_seed();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--dof", spec.dof, "Joints per demo");
  synth->add_option("--demos", spec.demos, "Number of demos");
  synth->add_option("--samples", spec.samples, "Rows per demo");
  synth->add_option("--duration", spec.duration, "Nominal duration, seconds");
  synth->add_option("--noise-deg", spec.noise_deg, "Sample noise, degrees");
  synth->add_option("--warp", spec.warp, "Time warp strength");
  synth->add_option("--shape", spec.shape, "Task geometry selector");
  synth->add_option("--seed", spec.seed, "Random seed");

  // train
  auto* train = app.add_subcommand("train", "Train a motion model");
  std::string train_demos, train_model_path, train_trace;
  lfd::TrainOptions topts;
  topts.seed = default_seed();
  train->add_option("--demos", train_demos, "Directory of demo CSVs")
      ->required();
  train->add_option("--model", train_model_path, "Output model JSON")
      ->required();
  train->add_option("--seed", topts.seed, "Random seed");
  train->add_option("--kmin", topts.k_min, "Smallest component count");
  train->add_option("--kmax", topts.k_max, "Largest component count");
  train->add_option("--splits", topts.splits, "Half/half refits per k");
  train->add_option("--mc-samples", topts.mc_samples,
                    "Divergence Monte Carlo draws");
  train->add_option("--alpha", topts.alpha, "Welch test level");
  train->add_option("--max-calls", topts.max_calls,
                    "Optimizer evaluation budget");
  train->add_option("--trace-out", train_trace, "Optimizer trace CSV");

  // reproduce
  auto* repro = app.add_subcommand(
      "reproduce", "Roll the learned motion out to a new start/goal");
  std::string repro_model, repro_out, repro_start, repro_goal;
  double repro_dt = 0.0;
  bool with_velocity = false;
  repro->add_option("--model", repro_model, "Model JSON")->required();
  repro->add_option("--out", repro_out, "Output trajectory CSV")->required();
  repro->add_option("--start", repro_start,
                    "Comma-separated start angles (default: trained start)");
  repro->add_option("--goal", repro_goal,
                    "Comma-separated goal angles (default: trained goal)");
  repro->add_option("--dt", repro_dt,
                    "Integration step, seconds (default: trained median)");
  repro->add_flag("--with-z", with_velocity,
                  "Append scaled velocity columns");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Reproduction quality under start perturbations");
  std::string eval_model, eval_out;
  std::string eval_noise = "1,5,10,20";
  int eval_reps = 30;
  std::uint64_t eval_seed = default_seed();
  evaluate->add_option("--model", eval_model, "Model JSON")->required();
  evaluate->add_option("--out", eval_out, "Also write the table here");
  evaluate->add_option("--reps", eval_reps, "Repetitions per noise level");
  evaluate->add_option("--noise-deg", eval_noise,
                       "Comma-separated perturbation magnitudes");
  evaluate->add_option("--seed", eval_seed, "Random seed");

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Grid search vs Bayesian optimization on one objective");
  std::string cmp_demos, cmp_out, cmp_grid_trace, cmp_bayes_trace;
  lfd::TrainOptions copts;
  copts.seed = default_seed();
  compare->add_option("--demos", cmp_demos, "Directory of demo CSVs")
      ->required();
  compare->add_option("--out", cmp_out, "Also write the table here");
  compare->add_option("--seed", copts.seed, "Random seed");
  compare->add_option("--kmin", copts.k_min, "Smallest component count");
  compare->add_option("--kmax", copts.k_max, "Largest component count");
  compare->add_option("--splits", copts.splits, "Half/half refits per k");
  compare->add_option("--grid-trace-out", cmp_grid_trace,
                      "Grid evaluations CSV");
  compare->add_option("--bayes-trace-out", cmp_bayes_trace,
                      "Optimizer trace CSV");

  // dump-gmr
  auto* dump = app.add_subcommand(
      "dump-gmr", "Write a model's generalized trajectory as CSV");
  std::string dump_model, dump_out;
  dump->add_option("--model", dump_model, "Model JSON")->required();
  dump->add_option("--out", dump_out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    const lfd::DemonstrationSet set = lfd::synthesize_demonstrations(spec);
    fs::create_directories(synth_out);
    for (int m = 0; m < set.size(); ++m) {
      char name[32];
      std::snprintf(name, sizeof(name), "demo_%02d.csv", m);
      lfd::save_demonstration(set.demos[m], fs::path(synth_out) / name);
    }
    std::cerr << "wrote " << set.size() << " demos to " << synth_out << "\n";
    return 0;
  }

  if (train->parsed()) {
    const lfd::DemonstrationSet set = lfd::load_demonstration_dir(train_demos);
    lfd::TrainReport report;
    const lfd::MotionModel model = lfd::train_model(set, topts, &report);
    lfd::save_model(model, train_model_path);
    if (!train_trace.empty()) write_trace(report.optimization, train_trace);

    std::cout << "k_star=" << report.k_star << "\n"
              << "alpha_z=" << lfd::format_double(report.alpha_z) << "\n"
              << "n_basis=" << report.n_basis << "\n"
              << "optimizer_calls=" << report.optimizer_calls << "\n"
              << "objective=" << lfd::format_double(report.objective) << "\n"
              << "model=" << train_model_path << "\n";
    std::cerr << "trained in " << report.seconds << " s\n";
    return 0;
  }

  if (repro->parsed()) {
    const lfd::MotionModel model = lfd::load_model(repro_model);
    const Eigen::VectorXd trained_start =
        model.gmr.means.row(0).transpose();
    const Eigen::VectorXd trained_goal =
        model.gmr.means.row(model.gmr.length() - 1).transpose();
    const Eigen::VectorXd start =
        repro_start.empty()
            ? trained_start
            : parse_joint_vector(repro_start, model.dof, "start");
    const Eigen::VectorXd goal =
        repro_goal.empty() ? trained_goal
                           : parse_joint_vector(repro_goal, model.dof, "goal");

    const lfd::Reproduction result =
        lfd::reproduce(model, start, goal, repro_dt);
    lfd::save_trajectory(result.timestamps, result.positions, repro_out,
                         with_velocity ? &result.velocities : nullptr);
    std::cout << "joint_error=" << lfd::format_double(result.joint_error)
              << "\n"
              << "gmcc=" << lfd::format_double(result.gmcc) << "\n"
              << "trajectory=" << repro_out << "\n";
    return 0;
  }

  if (evaluate->parsed()) {
    const lfd::MotionModel model = lfd::load_model(eval_model);
    const std::vector<double> noise =
        parse_number_list(eval_noise, "noise level");
    const auto rows = lfd::evaluate_model(model, eval_reps, noise, eval_seed);
    const std::string table = evaluation_csv(rows);
    std::cout << table;
    if (!eval_out.empty()) lfd::write_file_atomic(eval_out, table);
    return 0;
  }

  if (compare->parsed()) {
    const lfd::DemonstrationSet set = lfd::load_demonstration_dir(cmp_demos);
    const lfd::CompareReport report = lfd::compare_optimizers(set, copts);
    if (!cmp_grid_trace.empty()) write_trace(report.grid, cmp_grid_trace);
    if (!cmp_bayes_trace.empty()) write_trace(report.bayes, cmp_bayes_trace);

    std::ostringstream out;
    out << "method,objective,alpha_z,n_basis,calls\n"
        << "grid," << lfd::format_double(report.grid.value) << ","
        << lfd::format_double(report.grid.alpha_z) << ","
        << report.grid.n_basis << "," << report.grid.calls() << "\n"
        << "bayes," << lfd::format_double(report.bayes.value) << ","
        << lfd::format_double(report.bayes.alpha_z) << ","
        << report.bayes.n_basis << "," << report.bayes.calls() << "\n";
    std::cout << out.str();
    if (!cmp_out.empty()) lfd::write_file_atomic(cmp_out, out.str());
    // Wall times stay off stdout so reports are byte-stable across runs.
    std::cerr << "grid " << report.grid_seconds << " s, bayes "
              << report.bayes_seconds << " s\n";
    return 0;
  }

  if (dump->parsed()) {
    const lfd::MotionModel model = lfd::load_model(dump_model);
    lfd::save_trajectory(model.gmr.timestamps, model.gmr.means, dump_out);
    std::cout << "trajectory=" << dump_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
