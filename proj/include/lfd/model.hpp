#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lfd/gmr.hpp"
#include "lfd/spring.hpp"
#include "lfd/types.hpp"

namespace lfd {

inline constexpr int kModelFormatVersion = 1;

// Everything needed to reproduce a learned motion: the per-joint mixtures,
// the regressed trajectory they produce, and the tuned spring per joint.
struct MotionModel {
  int dof = 0;
  int k_star = 0;
  double alpha_z = 0.0;  // optimizer's choice, mirrored in every spring
  int n_basis = 0;
  std::uint64_t seed = 0;
  std::vector<JointGmm> gmms;        // one per joint
  std::vector<SpringModel> springs;  // one per joint
  GeneralizedTrajectory gmr;
  std::map<std::string, std::string> provenance;

  // Throws std::invalid_argument naming the violated consistency rule.
  void validate() const;
};

// JSON serialization. Numbers are written in shortest round-trip form, so
// save -> load -> save is byte-identical. Files are written atomically.
void save_model(const MotionModel& model, const std::filesystem::path& path);
MotionModel load_model(const std::filesystem::path& path);

// ISO-8601 UTC timestamp for provenance. Honors SOURCE_DATE_EPOCH so
// reproducible runs can pin the recorded date.
std::string provenance_timestamp();

}  // namespace lfd
