#include "lfd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lfd/metrics.hpp"
#include "lfd/rng.hpp"

namespace lfd {

namespace {

// Substream ids for the independent random streams of one training run.
enum StreamId : std::uint64_t {
  kSelectStream = 1,
  kMixtureStream = 2,
  kOptimizerStream = 3,
  kEvaluateStream = 4,
  kSynthTaskStream = 5,
  kSynthDemoStream = 6,
};

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& err) {
    throw std::runtime_error(std::string("train: ") + name + ": " +
                             err.what());
  }
}

// Pooled selection data: one row (t, theta_1..theta_n) per aligned sample
// of every demo, so the component count reflects all joints at once.
Eigen::MatrixXd pooled_selection_data(const AlignedDataset& aligned) {
  const int t_count = aligned.length();
  const int m = aligned.size();
  const int n = aligned.dof();
  Eigen::MatrixXd data(static_cast<Eigen::Index>(m) * t_count, 1 + n);
  Eigen::Index row = 0;
  for (int demo = 0; demo < m; ++demo) {
    for (int i = 0; i < t_count; ++i, ++row) {
      data(row, 0) = aligned.reference_timestamps[i];
      data.row(row).tail(n) = aligned.demos[demo].row(i);
    }
  }
  return data;
}

double median_step(const std::vector<double>& timestamps) {
  std::vector<double> steps(timestamps.size() - 1);
  for (std::size_t i = 0; i + 1 < timestamps.size(); ++i) {
    steps[i] = timestamps[i + 1] - timestamps[i];
  }
  std::nth_element(steps.begin(), steps.begin() + steps.size() / 2,
                   steps.end());
  return steps[steps.size() / 2];
}

void mean_and_std(const std::vector<double>& xs, double& mean,
                  double& stddev) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  stddev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

// Minimum-jerk unit stroke: 0 at s=0, 1 at s=1, zero velocity and
// acceleration at both ends.
double min_jerk(double s) {
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

struct TrainedRegression {
  AlignedDataset aligned;
  SelectionResult selection;
  std::vector<JointGmm> gmms;
  GmrResult regression;
};

TrainedRegression train_regression(const DemonstrationSet& set,
                                   const TrainOptions& opts) {
  TrainedRegression out;
  out.aligned = stage("align", [&] { return align_demonstrations(set); });

  out.selection = stage("select", [&] {
    SelectionConfig cfg;
    cfg.k_min = opts.k_min;
    cfg.k_max = opts.k_max;
    cfg.splits = opts.splits;
    cfg.mc_samples = opts.mc_samples;
    cfg.alpha = opts.alpha;
    cfg.seed = derive_seed(opts.seed, {kSelectStream});
    return select_k(pooled_selection_data(out.aligned), cfg);
  });

  out.gmms = stage("mixture", [&] {
    return fit_joint_gmms(out.aligned, out.selection.k_star,
                          derive_seed(opts.seed, {kMixtureStream}));
  });

  out.regression =
      stage("regress", [&] { return gmr_on_reference(out.gmms, out.aligned); });
  return out;
}

}  // namespace

MotionModel train_model(const DemonstrationSet& set, const TrainOptions& opts,
                        TrainReport* report) {
  const auto started = std::chrono::steady_clock::now();
  TrainedRegression reg = train_regression(set, opts);

  const OptimizeResult tuned = stage("optimize", [&] {
    return bayes_opt(tracking_objective(reg.regression.trajectory),
                     opts.space, derive_seed(opts.seed, {kOptimizerStream}),
                     opts.max_calls);
  });

  MotionModel model;
  model.dof = set.dof();
  model.k_star = reg.selection.k_star;
  model.alpha_z = tuned.alpha_z;
  model.n_basis = tuned.n_basis;
  model.seed = opts.seed;
  model.gmms = std::move(reg.gmms);
  model.gmr = reg.regression.trajectory;

  stage("encode", [&] {
    model.springs.reserve(model.dof);
    for (int j = 0; j < model.dof; ++j) {
      model.springs.push_back(fit_spring(model.gmr.timestamps,
                                         model.gmr.means.col(j),
                                         tuned.alpha_z, tuned.n_basis));
    }
    return 0;
  });

  std::string sources;
  for (const auto& demo : set.demos) {
    if (demo.source.empty()) continue;
    if (!sources.empty()) sources += ";";
    sources += std::filesystem::path(demo.source).filename().string();
  }
  model.provenance["demos"] = sources;
  model.provenance["trained_at"] = provenance_timestamp();
  model.provenance["seed"] = std::to_string(opts.seed);
  model.validate();

  if (report) {
    report->k_star = model.k_star;
    report->alpha_z = model.alpha_z;
    report->n_basis = model.n_basis;
    report->objective = tuned.value;
    report->optimizer_calls = tuned.calls();
    report->selection = reg.selection.records;
    report->optimization = tuned;
    report->seconds = elapsed_seconds(started);
  }
  return model;
}

Reproduction reproduce(const MotionModel& model, const Eigen::VectorXd& start,
                       const Eigen::VectorXd& goal, double dt) {
  model.validate();
  if (start.size() != model.dof || goal.size() != model.dof) {
    throw std::invalid_argument("reproduce: start/goal must have " +
                                std::to_string(model.dof) + " joints");
  }
  if (dt <= 0.0) dt = median_step(model.gmr.timestamps);

  Reproduction out;
  for (int j = 0; j < model.dof; ++j) {
    const Rollout roll = rollout(model.springs[j], start[j], goal[j], dt);
    if (j == 0) {
      out.timestamps = roll.timestamps;
      out.positions.resize(roll.y.size(), model.dof);
      out.velocities.resize(roll.y.size(), model.dof);
    }
    out.positions.col(j) = roll.y;
    out.velocities.col(j) = roll.z;
  }

  out.joint_error = joint_error(
      goal, out.positions.row(out.positions.rows() - 1).transpose());

  // Compare on time offsets; the stored trajectory may not start at zero.
  std::vector<double> ref_offsets(model.gmr.timestamps.size());
  const double t0 = model.gmr.timestamps.front();
  for (std::size_t i = 0; i < ref_offsets.size(); ++i) {
    ref_offsets[i] = model.gmr.timestamps[i] - t0;
  }
  out.gmcc = gmcc_resampled(ref_offsets, model.gmr.means, out.timestamps,
                            out.positions);
  return out;
}

std::vector<EvaluationRow> evaluate_model(const MotionModel& model, int reps,
                                          const std::vector<double>& noise_deg,
                                          std::uint64_t seed) {
  model.validate();
  if (reps < 1) {
    throw std::invalid_argument("evaluate: reps must be positive");
  }
  if (noise_deg.empty()) {
    throw std::invalid_argument("evaluate: no noise levels");
  }

  const Eigen::VectorXd base_start = model.gmr.means.row(0).transpose();
  const Eigen::VectorXd goal =
      model.gmr.means.row(model.gmr.length() - 1).transpose();

  std::vector<EvaluationRow> rows;
  rows.reserve(noise_deg.size());
  for (std::size_t level = 0; level < noise_deg.size(); ++level) {
    const double sigma = noise_deg[level];
    if (sigma < 0.0) {
      throw std::invalid_argument("evaluate: negative noise level");
    }
    std::vector<double> gmccs(reps), errors(reps);
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng(derive_seed(seed, {kEvaluateStream,
                                 static_cast<std::uint64_t>(level),
                                 static_cast<std::uint64_t>(rep)}));
      Eigen::VectorXd start = base_start;
      for (int j = 0; j < model.dof; ++j) start[j] += sigma * rng.normal();
      const Reproduction rep_out = reproduce(model, start, goal);
      gmccs[rep] = rep_out.gmcc;
      errors[rep] = rep_out.joint_error;
    }
    EvaluationRow row;
    row.noise_deg = sigma;
    row.reps = reps;
    mean_and_std(gmccs, row.gmcc_mean, row.gmcc_std);
    mean_and_std(errors, row.joint_error_mean, row.joint_error_std);
    rows.push_back(row);
  }
  return rows;
}

CompareReport compare_optimizers(const DemonstrationSet& set,
                                 const TrainOptions& opts) {
  TrainedRegression reg = train_regression(set, opts);
  const Objective objective = tracking_objective(reg.regression.trajectory);

  CompareReport report;
  auto t0 = std::chrono::steady_clock::now();
  report.grid = grid_search(objective, opts.space);
  report.grid_seconds = elapsed_seconds(t0);

  t0 = std::chrono::steady_clock::now();
  report.bayes = bayes_opt(objective, opts.space,
                           derive_seed(opts.seed, {kOptimizerStream}),
                           opts.max_calls);
  report.bayes_seconds = elapsed_seconds(t0);
  return report;
}

DemonstrationSet synthesize_demonstrations(const SynthSpec& spec) {
  if (spec.dof < 1 || spec.demos < 2 || spec.samples < 10) {
    throw std::invalid_argument(
        "synth: need dof >= 1, demos >= 2, samples >= 10");
  }
  if (!(spec.duration > 0.0) || spec.duration_jitter < 0.0 ||
      spec.duration_jitter >= 1.0) {
    throw std::invalid_argument("synth: bad duration parameters");
  }
  if (spec.warp < 0.0 || spec.warp > 0.25) {
    throw std::invalid_argument("synth: warp must stay in [0, 0.25]");
  }

  // Task geometry is shared by all demos of one (seed, shape) pair. Large
  // strokes with a mid-motion detour keep the signal well above the noise.
  const auto shape_id = static_cast<std::uint64_t>(spec.shape);
  Rng task_rng(derive_seed(spec.seed, {kSynthTaskStream, shape_id}));
  std::vector<double> start(spec.dof), stroke(spec.dof), detour(spec.dof);
  for (int j = 0; j < spec.dof; ++j) {
    start[j] = task_rng.uniform(-90.0, 90.0);
    const double sign = task_rng.uniform() < 0.5 ? -1.0 : 1.0;
    stroke[j] = sign * task_rng.uniform(100.0, 170.0);
    detour[j] = task_rng.uniform(-60.0, 60.0);
  }

  DemonstrationSet set;
  set.demos.reserve(spec.demos);
  for (int m = 0; m < spec.demos; ++m) {
    Rng rng(derive_seed(spec.seed,
                        {kSynthDemoStream, shape_id,
                         static_cast<std::uint64_t>(m)}));
    const double duration =
        spec.duration * (1.0 + spec.duration_jitter * rng.uniform(-1.0, 1.0));
    const double warp_amount = spec.warp * rng.uniform(-1.0, 1.0);

    Demonstration demo;
    demo.timestamps.resize(spec.samples);
    demo.joints.resize(spec.samples, spec.dof);
    for (int i = 0; i < spec.samples; ++i) {
      const double s = static_cast<double>(i) / (spec.samples - 1);
      // Smooth monotone warp: vanishes at both ends, never reorders time.
      const double warped =
          s + warp_amount * std::sin(std::numbers::pi * s) / std::numbers::pi;
      demo.timestamps[i] = duration * s;
      for (int j = 0; j < spec.dof; ++j) {
        const double clean =
            start[j] + stroke[j] * min_jerk(warped) +
            detour[j] * std::pow(std::sin(std::numbers::pi * warped), 2);
        demo.joints(i, j) = clean + spec.noise_deg * rng.normal();
      }
    }
    set.demos.push_back(std::move(demo));
  }
  set.validate();
  return set;
}

}  // namespace lfd
