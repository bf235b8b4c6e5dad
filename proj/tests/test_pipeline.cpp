#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "slf/pipeline.hpp"
#include "slf/rng.hpp"

using namespace slf;

TEST_SUITE_BEGIN("pipeline");

namespace {

namespace fs = std::filesystem;

std::string temp_file(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

TimeSeriesTable minute_table(std::size_t rows, std::int64_t start = 1388966400) {
  TimeSeriesTable t;
  t.appliances = {"a"};
  t.columns.resize(1);
  for (std::size_t r = 0; r < rows; ++r) {
    t.timestamps.push_back(start + static_cast<std::int64_t>(r) * 60);
    t.columns[0].push_back(0.0);
  }
  return t;
}

}  // namespace

TEST_CASE("timestamp round trip and weekday") {
  CHECK(parse_timestamp("2014-01-15T00:00:00Z") == 1389744000);
  CHECK(format_timestamp(1389744000) == "2014-01-15T00:00:00Z");
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  // 2014-01-06 was a Monday, 1970-01-01 a Thursday
  CHECK(utc_weekday(1388966400) == 0);
  CHECK(utc_weekday(0) == 3);
  CHECK_THROWS_AS(parse_timestamp("2014-01-15 00:00:00"), Error);
  CHECK_THROWS_AS(parse_timestamp("2014-13-15T00:00:00Z"), Error);
}

TEST_CASE("csv parse basics") {
  const std::string path = temp_file("slf_parse_test.csv");

  SUBCASE("missing cells become absent readings") {
    std::ofstream(path) << "timestamp,fridge,lamp\n"
                           "2014-01-06T00:00:00Z,10,1\n"
                           "2014-01-06T00:01:00Z,,2\n"
                           "2014-01-06T00:02:00Z,30,3\n";
    const TimeSeriesTable t = parse_csv(path);
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
    CHECK(t.columns[0][0] == 10.0);
    CHECK(is_absent(t.columns[0][1]));
    CHECK(t.columns[1][1] == 2.0);
  }

  SUBCASE("duplicate timestamp is a schema error") {
    std::ofstream(path) << "timestamp,fridge\n"
                           "2014-01-06T00:00:00Z,10\n"
                           "2014-01-06T00:00:00Z,20\n";
    CHECK_THROWS_AS(parse_csv(path), Error);
  }

  SUBCASE("malformed number names the line") {
    std::ofstream(path) << "timestamp,fridge\n"
                           "2014-01-06T00:00:00Z,10\n"
                           "2014-01-06T00:01:00Z,oops\n";
    try {
      parse_csv(path);
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(e.status() == Status::Parse);
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }

  SUBCASE("negative readings are rejected") {
    std::ofstream(path) << "timestamp,fridge\n2014-01-06T00:00:00Z,-5\n";
    CHECK_THROWS_AS(parse_csv(path), Error);
  }

  SUBCASE("write then parse reproduces the table") {
    TimeSeriesTable t = minute_table(50);
    Rng rng(3);
    for (std::size_t r = 0; r < 50; ++r) {
      t.columns[0][r] = r % 7 == 0 ? absent() : rng.uniform(0.0, 2000.0);
    }
    write_csv(t, path);
    const TimeSeriesTable u = parse_csv(path);
    REQUIRE(u.rows() == t.rows());
    CHECK(u.timestamps == t.timestamps);
    for (std::size_t r = 0; r < 50; ++r) {
      if (is_absent(t.columns[0][r])) {
        CHECK(is_absent(u.columns[0][r]));
      } else {
        CHECK(u.columns[0][r] == t.columns[0][r]);  // exact round trip
      }
    }
  }

  std::remove(path.c_str());
}

TEST_CASE("interpolation") {
  TimeSeriesTable t = minute_table(4);

  SUBCASE("linear fill between anchors") {
    t.columns[0] = {100.0, absent(), absent(), 400.0};
    const TimeSeriesTable out = interpolate_missing(t);
    CHECK(out.columns[0] == std::vector{100.0, 200.0, 300.0, 400.0});
  }

  SUBCASE("no gaps is the identity") {
    t.columns[0] = {1.0, 2.0, 3.0, 4.0};
    CHECK(interpolate_missing(t).columns[0] == t.columns[0]);
  }

  SUBCASE("edges extend the nearest value") {
    t.columns[0] = {absent(), 5.0, 7.0, absent()};
    const TimeSeriesTable out = interpolate_missing(t);
    CHECK(out.columns[0] == std::vector{5.0, 5.0, 7.0, 7.0});
  }

  SUBCASE("idempotent") {
    t.columns[0] = {absent(), 5.0, absent(), 9.0};
    const TimeSeriesTable once = interpolate_missing(t);
    const TimeSeriesTable twice = interpolate_missing(once);
    CHECK(once.columns[0] == twice.columns[0]);
  }

  SUBCASE("single present reading violates the precondition") {
    t.columns[0] = {absent(), 5.0, absent(), absent()};
    CHECK_THROWS_AS(interpolate_missing(t), Error);
  }

  SUBCASE("fully absent column is invalid") {
    t.columns[0] = {absent(), absent(), absent(), absent()};
    CHECK_THROWS_AS(interpolate_missing(t), Error);
  }
}

TEST_CASE("resampling") {
  SUBCASE("constant readings average to themselves") {
    TimeSeriesTable t = minute_table(10);
    for (double& v : t.columns[0]) v = 70.0;
    const TimeSeriesTable out = resample_mean(t, 10);
    REQUIRE(out.rows() == 1);
    CHECK(out.columns[0][0] == 70.0);
    CHECK(out.timestamps[0] == 1388966400);
  }

  SUBCASE("hand mean with one spike") {
    TimeSeriesTable t = minute_table(10);
    t.columns[0] = {0, 0, 0, 0, 0, 600, 0, 0, 0, 0};
    CHECK(resample_mean(t, 10).columns[0][0] == doctest::Approx(60.0));
  }

  SUBCASE("aligned series resample to themselves") {
    TimeSeriesTable t;
    t.appliances = {"a"};
    t.columns.resize(1);
    for (std::size_t r = 0; r < 12; ++r) {
      t.timestamps.push_back(1388966400 + static_cast<std::int64_t>(r) * 600);
      t.columns[0].push_back(static_cast<double>(r));
    }
    const TimeSeriesTable out = resample_mean(t, 10);
    CHECK(out.timestamps == t.timestamps);
    CHECK(out.columns[0] == t.columns[0]);
  }

  SUBCASE("energy is conserved within bins") {
    TimeSeriesTable t = minute_table(120);
    Rng rng(5);
    for (double& v : t.columns[0]) v = rng.uniform(0.0, 500.0);
    const TimeSeriesTable out = resample_mean(t, 10);
    REQUIRE(out.rows() == 12);
    for (std::size_t b = 0; b < 12; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < 10; ++i) sum += t.columns[0][b * 10 + i];
      CHECK(out.columns[0][b] * 10.0 ==
            doctest::Approx(sum).epsilon(1e-9));
    }
  }

  SUBCASE("empty bins come back absent") {
    TimeSeriesTable t;
    t.appliances = {"a"};
    t.columns.resize(1);
    t.timestamps = {1388966400, 1388966400 + 1800};  // 30 min apart
    t.columns[0] = {10.0, 40.0};
    const TimeSeriesTable out = resample_mean(t, 10);
    REQUIRE(out.rows() == 4);
    CHECK(out.columns[0][0] == 10.0);
    CHECK(is_absent(out.columns[0][1]));
    CHECK(is_absent(out.columns[0][2]));
    CHECK(out.columns[0][3] == 40.0);
  }

  SUBCASE("interval must divide the hour") {
    TimeSeriesTable t = minute_table(10);
    CHECK_THROWS_AS(resample_mean(t, 7), Error);
  }
}

TEST_CASE("normalizer") {
  TimeSeriesTable t = minute_table(4);
  t.appliances = {"heater"};
  t.columns[0] = {10.0, 500.0, 2010.0, 100.0};
  const NormalizerStats stats = fit_normalizer(t);
  CHECK(stats.min_watts[0] == 10.0);
  CHECK(stats.max_watts[0] == 2010.0);

  SUBCASE("hand normalization") {
    CHECK(normalize_value(50.0, 10.0, 2010.0) == doctest::Approx(0.02));
    CHECK(normalize_value(10.0, 10.0, 2010.0) == 0.0);
    CHECK(normalize_value(2010.0, 10.0, 2010.0) == 1.0);
  }

  SUBCASE("round trip under 1e-9") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(0.0, 2500.0);
      const double u = normalize_value(x, 10.0, 2010.0);
      CHECK(std::abs(denormalize_value(u, 10.0, 2010.0) - x) < 1e-9);
    }
  }

  SUBCASE("constant column names the appliance") {
    TimeSeriesTable flat = minute_table(4);
    flat.appliances = {"always_off"};
    flat.columns[0] = {5.0, 5.0, 5.0, 5.0};
    try {
      fit_normalizer(flat);
      FAIL("expected degenerate scale error");
    } catch (const Error& e) {
      CHECK(e.status() == Status::DegenerateScale);
      CHECK(std::string(e.what()).find("always_off") != std::string::npos);
    }
  }

  SUBCASE("stats sidecar round trip") {
    const std::string path = temp_file("slf_norm_test.csv");
    write_normalizer_stats(stats, path);
    const NormalizerStats back = read_normalizer_stats(path);
    CHECK(back.appliances == stats.appliances);
    CHECK(back.min_watts == stats.min_watts);
    CHECK(back.max_watts == stats.max_watts);
    std::remove(path.c_str());
  }
}

TEST_CASE("chronological split") {
  TimeSeriesTable t = minute_table(100);
  for (std::size_t r = 0; r < 100; ++r) t.columns[0][r] = static_cast<double>(r);

  SUBCASE("70/20/10 of 100 rows") {
    const SplitTables s = chronological_split(t, 0.7, 0.2, 0.1, 1);
    CHECK(s.train.rows() == 70);
    CHECK(s.validation.rows() == 20);
    CHECK(s.test.rows() == 10);
  }

  SUBCASE("partition is exact and ordered") {
    const SplitTables s = chronological_split(t, 0.7, 0.2, 0.1, 1);
    std::vector<double> joined;
    for (const auto* part : {&s.train, &s.validation, &s.test}) {
      joined.insert(joined.end(), part->columns[0].begin(),
                    part->columns[0].end());
    }
    CHECK(joined == t.columns[0]);
    CHECK(s.train.timestamps.back() < s.validation.timestamps.front());
    CHECK(s.validation.timestamps.back() < s.test.timestamps.front());
  }

  SUBCASE("odd row counts drop nothing") {
    TimeSeriesTable t2 = minute_table(101);
    const SplitTables s = chronological_split(t2, 0.7, 0.2, 0.1, 1);
    CHECK(s.train.rows() + s.validation.rows() + s.test.rows() == 101);
  }

  SUBCASE("segments below the window minimum are rejected") {
    TimeSeriesTable t2 = minute_table(10);
    CHECK_THROWS_AS(chronological_split(t2, 0.7, 0.2, 0.1, 150), Error);
  }

  SUBCASE("ratios must sum to one") {
    CHECK_THROWS_AS(chronological_split(t, 0.5, 0.2, 0.1, 1), Error);
  }
}

TEST_CASE("window construction") {
  PreprocessConfig cfg;  // n=144, m=6, stride=6
  NormalizerStats stats;
  stats.appliances = {"a"};
  stats.min_watts = {0.0};
  stats.max_watts = {200.0};

  auto table_with = [&](std::size_t rows) {
    TimeSeriesTable t;
    t.appliances = {"a"};
    t.columns.resize(1);
    for (std::size_t r = 0; r < rows; ++r) {
      t.timestamps.push_back(1388966400 + static_cast<std::int64_t>(r) * 600);
      t.columns[0].push_back(static_cast<double>(r % 200));
    }
    return t;
  };

  SUBCASE("150 rows make exactly one window") {
    const auto w = make_windows(table_with(150), 0, stats, cfg, "b0");
    CHECK(w.size() == 1);
  }

  SUBCASE("156 rows make two windows") {
    const auto w = make_windows(table_with(156), 0, stats, cfg, "b0");
    CHECK(w.size() == 2);
  }

  SUBCASE("window count formula holds across sizes") {
    for (std::size_t rows : {150u, 200u, 444u, 1000u}) {
      const auto w = make_windows(table_with(rows), 0, stats, cfg, "b0");
      CHECK(w.size() == (rows - 150) / 6 + 1);
    }
  }

  SUBCASE("window content: features, targets, reversal, label") {
    const auto windows = make_windows(table_with(156), 0, stats, cfg, "b0");
    const Window& w = windows[1];  // starts at row 6
    CHECK(w.inputs.rows == 144);
    CHECK(w.inputs.cols == 8);
    CHECK(w.building_id == "b0");
    CHECK(w.appliance_name == "a");
    CHECK(w.appliance_label == 0);

    for (std::size_t t = 0; t < 144; ++t) {
      const double raw = static_cast<double>((t + 6) % 200);
      CHECK(w.inputs.at(t, 0) == doctest::Approx(raw / 200.0).epsilon(1e-12));
      // one-hot day of week with exactly one bit set, matching the bin start
      int ones = 0;
      for (std::size_t d = 0; d < 7; ++d) {
        ones += w.inputs.at(t, 1 + d) == 1.0 ? 1 : 0;
      }
      CHECK(ones == 1);
      const std::int64_t ts = 1388966400 + static_cast<std::int64_t>(t + 6) * 600;
      CHECK(w.inputs.at(t, 1 + utc_weekday(ts)) == 1.0);
    }
    for (std::size_t j = 0; j < 6; ++j) {
      // window 1 starts at row 6, so targets cover rows 150..155
      const double raw = static_cast<double>((6 + 144 + j) % 200);
      CHECK(w.forecast_target[j] == doctest::Approx(raw / 200.0));
    }
    for (std::size_t t = 0; t < 144; ++t) {
      CHECK(w.reversed_target[143 - t] == w.inputs.at(t, 0));
    }
  }

  SUBCASE("too-small split is rejected") {
    CHECK_THROWS_AS(make_windows(table_with(149), 0, stats, cfg, "b0"), Error);
  }
}

TEST_SUITE_END();
