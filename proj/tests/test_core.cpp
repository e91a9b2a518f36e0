#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>

#include "lfd/csv.hpp"
#include "lfd/parallel.hpp"
#include "lfd/rng.hpp"
#include "lfd/types.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "lfd_core_test";
  fs::create_directories(dir);
  return dir;
}

lfd::Demonstration make_demo(int rows, int cols, double slope) {
  lfd::Demonstration demo;
  demo.timestamps.resize(rows);
  demo.joints.resize(rows, cols);
  for (int i = 0; i < rows; ++i) {
    demo.timestamps[i] = 0.1 * i;
    for (int j = 0; j < cols; ++j) {
      demo.joints(i, j) = slope * i + j;
    }
  }
  return demo;
}

}  // namespace

TEST_CASE("rng streams are deterministic and seed-sensitive") {
  lfd::Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  bool differed = false;
  lfd::Rng a2(42);
  for (int i = 0; i < 100; ++i) {
    if (a2.uniform() != c.uniform()) differed = true;
  }
  CHECK(differed);
}

TEST_CASE("derived seeds differ across id lists") {
  const auto s1 = lfd::derive_seed(7, {1, 2});
  const auto s2 = lfd::derive_seed(7, {2, 1});
  const auto s3 = lfd::derive_seed(7, {1, 2, 0});
  const auto s4 = lfd::derive_seed(8, {1, 2});
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 != s4);
  CHECK(s1 == lfd::derive_seed(7, {1, 2}));
}

TEST_CASE("normal draws have the expected moments") {
  lfd::Rng rng(1234);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("bounded draws cover the range uniformly") {
  lfd::Rng rng(99);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.bounded(7);
    REQUIRE(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
}

TEST_CASE("parallel_for result does not depend on thread count") {
  const std::size_t n = 1000;
  std::vector<double> one(n), four(n);
  auto work = [](std::size_t i) {
    lfd::Rng rng(lfd::derive_seed(5, {i}));
    return rng.normal() + rng.uniform();
  };
  lfd::parallel_for(n, [&](std::size_t i) { one[i] = work(i); }, 1);
  lfd::parallel_for(n, [&](std::size_t i) { four[i] = work(i); }, 4);
  CHECK(one == four);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(
      lfd::parallel_for(
          8, [](std::size_t i) { if (i == 3) throw std::runtime_error("boom"); },
          4),
      std::runtime_error);
}

TEST_CASE("demonstration validation catches bad input") {
  lfd::Demonstration demo = make_demo(5, 2, 1.0);
  CHECK_NOTHROW(demo.validate());

  lfd::Demonstration short_demo = make_demo(1, 2, 1.0);
  CHECK_THROWS_AS(short_demo.validate(), std::invalid_argument);

  lfd::Demonstration bad_time = make_demo(5, 2, 1.0);
  bad_time.timestamps[3] = bad_time.timestamps[2];
  CHECK_THROWS_AS(bad_time.validate(), std::invalid_argument);

  lfd::Demonstration bad_value = make_demo(5, 2, 1.0);
  bad_value.joints(4, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad_value.validate(), std::invalid_argument);
}

TEST_CASE("demonstration set requires matching dof") {
  lfd::DemonstrationSet set;
  set.demos.push_back(make_demo(5, 2, 1.0));
  CHECK_THROWS_AS(set.validate(), std::invalid_argument);

  set.demos.push_back(make_demo(6, 3, 1.0));
  CHECK_THROWS_AS(set.validate(), std::invalid_argument);

  set.demos[1] = make_demo(6, 2, 2.0);
  CHECK_NOTHROW(set.validate());
}

TEST_CASE("demonstration csv round-trips exactly") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "roundtrip.csv";

  lfd::Demonstration demo = make_demo(20, 3, 0.37);
  demo.joints(7, 1) = 1.0 / 3.0;  // not representable in short decimal
  demo.timestamps[11] += 1e-13;
  lfd::save_demonstration(demo, file);

  const lfd::Demonstration loaded = lfd::load_demonstration(file);
  REQUIRE(loaded.length() == demo.length());
  REQUIRE(loaded.dof() == demo.dof());
  for (int i = 0; i < demo.length(); ++i) {
    CHECK(loaded.timestamps[i] == demo.timestamps[i]);
    for (int j = 0; j < demo.dof(); ++j) {
      CHECK(loaded.joints(i, j) == demo.joints(i, j));
    }
  }
}

TEST_CASE("csv parse errors name the file and line") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "broken.csv";
  std::ofstream(file) << "t,j1\n0,1\n0.1,oops\n";
  try {
    lfd::load_demonstration(file);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& err) {
    const std::string what = err.what();
    CHECK(what.find("broken.csv") != std::string::npos);
    CHECK(what.find(":3") != std::string::npos);
  }
}

TEST_CASE("csv loader rejects ragged rows") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "ragged.csv";
  std::ofstream(file) << "t,j1,j2\n0,1,2\n0.1,3\n";
  CHECK_THROWS_AS(lfd::load_demonstration(file), std::runtime_error);
}

TEST_CASE("directory loader sorts lexically") {
  const fs::path dir = temp_dir() / "sorted";
  fs::remove_all(dir);
  fs::create_directories(dir);
  lfd::save_demonstration(make_demo(5, 1, 2.0), dir / "b.csv");
  lfd::save_demonstration(make_demo(5, 1, 1.0), dir / "a.csv");
  lfd::save_demonstration(make_demo(5, 1, 3.0), dir / "c.csv");

  const lfd::DemonstrationSet set = lfd::load_demonstration_dir(dir);
  REQUIRE(set.size() == 3);
  CHECK(set.demos[0].joints(1, 0) == 1.0);
  CHECK(set.demos[1].joints(1, 0) == 2.0);
  CHECK(set.demos[2].joints(1, 0) == 3.0);
}

TEST_CASE("atomic write leaves no temp file behind") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "atomic.txt";
  lfd::write_file_atomic(file, "first");
  lfd::write_file_atomic(file, "second");
  CHECK(!fs::exists(file.string() + ".tmp"));
  std::ifstream in(file);
  std::string content;
  std::getline(in, content);
  CHECK(content == "second");
}

TEST_CASE("format_double survives the round trip") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 0.1,
                   123456.789012345, 5e-324}) {
    const std::string text = lfd::format_double(v);
    double parsed = 0.0;
    const auto status =
        std::from_chars(text.data(), text.data() + text.size(), parsed);
    REQUIRE(status.ec == std::errc());
    CHECK(parsed == v);
  }
}
