#include "lfd/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace lfd {

namespace {

std::string parse_error(const std::filesystem::path& path, std::size_t line,
                        const std::string& what) {
  return path.string() + ":" + std::to_string(line) + ": " + what;
}

// Splits a CSV line on commas; surrounding spaces are tolerated.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    const char* ws = " \t\r";
    std::size_t b = field.find_first_not_of(ws);
    std::size_t e = field.find_last_not_of(ws);
    fields.push_back(b == std::string::npos ? std::string()
                                            : field.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error(
        parse_error(path, line, "cannot parse number '" + field + "'"));
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() +
                               "' for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out.flush()) {
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" +
                             path.string() + "': " + ec.message());
  }
}

Demonstration load_demonstration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }

  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  std::vector<double> timestamps;
  std::vector<double> values;  // row-major, n per row

  while (std::getline(in, line)) {
    ++line_no;
    // Skip blank lines and the header row.
    std::size_t content = line.find_first_not_of(" \t\r");
    if (content == std::string::npos) continue;
    auto fields = split_fields(line);
    if (line_no == 1 && !fields.empty() && (fields[0] == "t" || fields[0] == "time")) {
      n = static_cast<int>(fields.size()) - 1;
      continue;
    }
    if (fields.size() < 2) {
      throw std::runtime_error(
          parse_error(path, line_no, "expected at least 2 columns"));
    }
    if (n < 0) {
      n = static_cast<int>(fields.size()) - 1;
    } else if (static_cast<int>(fields.size()) != n + 1) {
      throw std::runtime_error(parse_error(
          path, line_no,
          "expected " + std::to_string(n + 1) + " columns, got " +
              std::to_string(fields.size())));
    }
    timestamps.push_back(parse_double(fields[0], path, line_no));
    for (int j = 0; j < n; ++j) {
      values.push_back(parse_double(fields[j + 1], path, line_no));
    }
  }

  Demonstration demo;
  demo.source = path.string();
  demo.timestamps = std::move(timestamps);
  const int rows = static_cast<int>(demo.timestamps.size());
  demo.joints.resize(rows, std::max(n, 0));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) {
      demo.joints(i, j) = values[static_cast<std::size_t>(i) * n + j];
    }
  }
  demo.validate();
  return demo;
}

void save_demonstration(const Demonstration& demo,
                        const std::filesystem::path& path) {
  demo.validate();
  save_trajectory(demo.timestamps, demo.joints, path);
}

DemonstrationSet load_demonstrations(
    const std::vector<std::filesystem::path>& paths) {
  DemonstrationSet set;
  set.demos.reserve(paths.size());
  for (const auto& path : paths) {
    set.demos.push_back(load_demonstration(path));
  }
  set.validate();
  return set;
}

DemonstrationSet load_demonstration_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw std::runtime_error("no .csv files in '" + dir.string() + "'");
  }
  return load_demonstrations(paths);
}

void save_trajectory(const std::vector<double>& timestamps,
                     const Eigen::MatrixXd& values,
                     const std::filesystem::path& path,
                     const Eigen::MatrixXd* velocities) {
  const Eigen::Index rows = values.rows();
  const Eigen::Index n = values.cols();
  if (static_cast<Eigen::Index>(timestamps.size()) != rows) {
    throw std::invalid_argument("trajectory rows do not match timestamps");
  }
  if (velocities &&
      (velocities->rows() != rows || velocities->cols() != n)) {
    throw std::invalid_argument("velocity matrix shape mismatch");
  }

  std::ostringstream out;
  out << "t";
  for (Eigen::Index j = 0; j < n; ++j) out << ",j" << (j + 1);
  if (velocities) {
    for (Eigen::Index j = 0; j < n; ++j) out << ",z" << (j + 1);
  }
  out << "\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    out << format_double(timestamps[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      out << "," << format_double(values(i, j));
    }
    if (velocities) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out << "," << format_double((*velocities)(i, j));
      }
    }
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

GeneralizedTrajectory load_trajectory(const std::filesystem::path& path) {
  Demonstration demo = load_demonstration(path);
  GeneralizedTrajectory traj;
  traj.timestamps = std::move(demo.timestamps);
  traj.means = std::move(demo.joints);
  return traj;
}

}  // namespace lfd
