#include "lfd/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lfd {

namespace {

std::string describe(const Demonstration& demo) {
  return demo.source.empty() ? std::string("demonstration")
                             : "demonstration '" + demo.source + "'";
}

}  // namespace

void Demonstration::validate() const {
  if (joints.rows() < 2) {
    throw std::invalid_argument(describe(*this) +
                                ": needs at least 2 samples, has " +
                                std::to_string(joints.rows()));
  }
  if (joints.cols() < 1) {
    throw std::invalid_argument(describe(*this) + ": has no joint columns");
  }
  if (static_cast<Eigen::Index>(timestamps.size()) != joints.rows()) {
    throw std::invalid_argument(
        describe(*this) + ": timestamp count " +
        std::to_string(timestamps.size()) + " does not match sample count " +
        std::to_string(joints.rows()));
  }
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (!std::isfinite(timestamps[i])) {
      throw std::invalid_argument(describe(*this) +
                                  ": non-finite timestamp at row " +
                                  std::to_string(i + 1));
    }
    if (i > 0 && timestamps[i] <= timestamps[i - 1]) {
      throw std::invalid_argument(
          describe(*this) + ": timestamps not strictly increasing at row " +
          std::to_string(i + 1));
    }
  }
  if (!joints.allFinite()) {
    throw std::invalid_argument(describe(*this) +
                                ": contains non-finite joint values");
  }
}

void DemonstrationSet::validate() const {
  if (demos.size() < 2) {
    throw std::invalid_argument("demonstration set: needs at least 2 demos, has " +
                                std::to_string(demos.size()));
  }
  const int n = demos.front().dof();
  for (const auto& demo : demos) {
    demo.validate();
    if (demo.dof() != n) {
      throw std::invalid_argument(
          "demonstration set: DOF mismatch, expected " + std::to_string(n) +
          " but " + (demo.source.empty() ? "a demo" : "'" + demo.source + "'") +
          " has " + std::to_string(demo.dof()));
    }
  }
}

}  // namespace lfd
