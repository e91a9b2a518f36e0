#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "lfd/types.hpp"

namespace lfd {

// Shortest decimal form that round-trips the exact double value. Used for
// every number we write, so identical values always produce identical bytes.
std::string format_double(double value);

// Writes content to path via a temporary file in the same directory plus an
// atomic rename, so readers never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Demonstration CSV: header "t,j1,...,jn", one row per sample. Errors name
// the file and the 1-based line that caused them.
Demonstration load_demonstration(const std::filesystem::path& path);
void save_demonstration(const Demonstration& demo,
                        const std::filesystem::path& path);

// Loads every *.csv in a directory in lexical filename order. The first
// file becomes the alignment reference.
DemonstrationSet load_demonstration_dir(const std::filesystem::path& dir);
DemonstrationSet load_demonstrations(
    const std::vector<std::filesystem::path>& paths);

// Trajectory CSV with the same "t,j1,...,jn" layout; pass a velocity matrix
// to append z1,...,zn columns.
void save_trajectory(const std::vector<double>& timestamps,
                     const Eigen::MatrixXd& values,
                     const std::filesystem::path& path,
                     const Eigen::MatrixXd* velocities = nullptr);

GeneralizedTrajectory load_trajectory(const std::filesystem::path& path);

}  // namespace lfd
