#include <cmath>

#include <doctest.h>

#include "slf/error.hpp"
#include "slf/synth.hpp"
#include "slf/timeseries.hpp"

using namespace slf;

TEST_SUITE_BEGIN("synth");

namespace {

ApplianceArchetype cycler(double on = 100.0, double period = 120.0,
                          double duty = 0.5, double jitter = 0.0) {
  ApplianceArchetype a;
  a.name = "fridge";
  a.kind = ArchetypeKind::Cycler;
  a.on_watts = on;
  a.period_minutes = period;
  a.duty = duty;
  a.phase_jitter_minutes = jitter;
  return a;
}

}  // namespace

TEST_CASE("cycler mean power tracks duty times on-power") {
  const auto a = cycler(100.0, 120.0, 0.5, 0.0);
  const auto series = gen_cycler(a, 120, 10, 1);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  CHECK(std::abs(mean - 50.0) < 1.0);

  // with jitter the duty fraction still holds to 2% over 120 days
  const auto b = cycler(100.0, 120.0, 0.5, 10.0);
  const auto jittered = gen_cycler(b, 120, 10, 1);
  double jmean = 0.0;
  for (double v : jittered) jmean += v;
  jmean /= static_cast<double>(jittered.size());
  CHECK(std::abs(jmean - 50.0) < 1.0);
}

TEST_CASE("cycler determinism and validation") {
  const auto a = cycler();
  CHECK(gen_cycler(a, 30, 1, 42) == gen_cycler(a, 30, 1, 42));

  auto bad = cycler();
  bad.duty = 0.0;
  CHECK_THROWS_AS(gen_cycler(bad, 30, 1, 1), Error);

  auto wrong_kind = cycler();
  wrong_kind.kind = ArchetypeKind::Event;
  CHECK_THROWS_AS(gen_cycler(wrong_kind, 30, 1, 1), Error);
}

TEST_CASE("event generator") {
  ApplianceArchetype a;
  a.name = "dishwasher";
  a.kind = ArchetypeKind::Event;
  a.on_watts = 1800.0;
  a.events_per_day = 1.0;
  a.event_duration_minutes = 60.0;

  SUBCASE("zero rate means an all-zero series") {
    a.events_per_day = 0.0;
    for (double v : gen_event(a, 10, 1, 3)) CHECK(v == 0.0);
  }

  SUBCASE("total energy concentrates near rate * duration * power") {
    const auto series = gen_event(a, 100, 1, 5);
    double watt_minutes = 0.0;
    for (double v : series) watt_minutes += v;  // 1-minute steps
    const double expected = 100.0 * 60.0 * 1800.0;
    CHECK(watt_minutes > 0.7 * expected);
    CHECK(watt_minutes < 1.3 * expected);
  }

  SUBCASE("power stays within bounds") {
    const auto series = gen_event(a, 50, 1, 7);
    for (double v : series) {
      CHECK(v >= 0.0);
      CHECK(v <= 2000.0);
    }
  }
}

TEST_CASE("schedule generator") {
  ApplianceArchetype a;
  a.name = "lamp";
  a.kind = ArchetypeKind::Schedule;
  a.on_watts = 60.0;
  a.active_start_hour = 18.0;
  a.active_end_hour = 23.0;
  a.start_jitter_minutes = 0.0;
  a.length_jitter_minutes = 0.0;

  SUBCASE("zero jitter, always used: on exactly inside the window") {
    const auto series = gen_schedule(a, 14, 1, 9);
    for (std::size_t i = 0; i < series.size(); ++i) {
      const std::size_t minute_of_day = i % 1440;
      const bool inside = minute_of_day >= 18 * 60 && minute_of_day < 23 * 60;
      CHECK(series[i] == (inside ? 60.0 : 0.0));
    }
  }

  SUBCASE("Monday probability zero silences Mondays") {
    a.weekday_use_prob = {0, 1, 1, 1, 1, 1, 1};
    const auto series = gen_schedule(a, 21, 1, 11);
    for (std::size_t i = 0; i < series.size(); ++i) {
      const std::size_t day = i / 1440;
      if (day % 7 == 0) CHECK(series[i] == 0.0);
    }
  }

  SUBCASE("deterministic given the seed") {
    a.start_jitter_minutes = 25.0;
    CHECK(gen_schedule(a, 30, 1, 13) == gen_schedule(a, 30, 1, 13));
  }
}

TEST_CASE("compose_building") {
  SynthSpec spec;
  spec.appliances = default_roster();
  spec.days = 20;
  spec.step_minutes = 10;
  spec.seed = 77;

  SUBCASE("shape and determinism") {
    const TimeSeriesTable t1 = compose_building(spec);
    CHECK(t1.cols() == 5);
    CHECK(t1.rows() == 20u * 144u);
    CHECK(t1.timestamps.front() == spec.start_timestamp);
    const TimeSeriesTable t2 = compose_building(spec);
    CHECK(t1.timestamps == t2.timestamps);
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(t1.columns[c] == t2.columns[c]);
    }
  }

  SUBCASE("all powers within the appliance range") {
    const TimeSeriesTable t = compose_building(spec);
    for (const auto& col : t.columns) {
      for (double v : col) {
        CHECK(v >= 0.0);
        CHECK(v <= 2000.0);
      }
    }
  }

  SUBCASE("gap injection lands near the requested fraction") {
    spec.gap_fraction = 0.01;
    spec.days = 30;
    std::size_t absent_cells = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      spec.seed = seed;
      const TimeSeriesTable t = compose_building(spec);
      for (const auto& col : t.columns) {
        for (double v : col) {
          absent_cells += is_absent(v) ? 1 : 0;
          ++total;
        }
      }
    }
    const double fraction =
        static_cast<double>(absent_cells) / static_cast<double>(total);
    CHECK(fraction > 0.005);
    CHECK(fraction < 0.015);
  }

  SUBCASE("gap fraction zero leaves no gaps") {
    const TimeSeriesTable t = compose_building(spec);
    for (const auto& col : t.columns) {
      for (double v : col) CHECK(!is_absent(v));
    }
  }

  SUBCASE("duplicate appliance names are rejected") {
    spec.appliances.push_back(spec.appliances.front());
    CHECK_THROWS_AS(compose_building(spec), Error);
  }

  SUBCASE("column order does not change per-appliance data") {
    const TimeSeriesTable t1 = compose_building(spec);
    SynthSpec reordered = spec;
    std::swap(reordered.appliances[0], reordered.appliances[3]);
    const TimeSeriesTable t2 = compose_building(reordered);
    const std::size_t a = t2.appliance_index("dishwasher");
    CHECK(t2.columns[a] == t1.columns[0]);
  }

  SUBCASE("non-Monday start is rejected") {
    spec.start_timestamp += 86400;
    CHECK_THROWS_AS(compose_building(spec), Error);
  }
}

TEST_SUITE_END();
