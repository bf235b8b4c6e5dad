#include "slf/synth.hpp"

#include <cmath>

#include "slf/error.hpp"
#include "slf/rng.hpp"
#include "slf/timeseries.hpp"

namespace slf {

ArchetypeKind archetype_kind_from_string(const std::string& s) {
  if (s == "cycler") return ArchetypeKind::Cycler;
  if (s == "event") return ArchetypeKind::Event;
  if (s == "schedule") return ArchetypeKind::Schedule;
  fail(Status::InvalidArgument, "unknown archetype kind: " + s);
}

const char* archetype_kind_name(ArchetypeKind k) {
  switch (k) {
    case ArchetypeKind::Cycler: return "cycler";
    case ArchetypeKind::Event: return "event";
    case ArchetypeKind::Schedule: return "schedule";
  }
  return "?";
}

void ApplianceArchetype::validate() const {
  require(!name.empty(), Status::InvalidArgument, "archetype needs a name");
  require(on_watts >= 10.0 && on_watts <= 2000.0, Status::InvalidArgument,
          name + ": on_watts must lie in [10, 2000]");
  switch (kind) {
    case ArchetypeKind::Cycler:
      require(period_minutes > 0, Status::InvalidArgument,
              name + ": period must be positive");
      require(duty > 0.0 && duty < 1.0, Status::InvalidArgument,
              name + ": duty fraction must lie in (0,1)");
      require(phase_jitter_minutes >= 0, Status::InvalidArgument,
              name + ": jitter must be >= 0");
      break;
    case ArchetypeKind::Event:
      require(events_per_day >= 0, Status::InvalidArgument,
              name + ": event rate must be >= 0");
      require(event_duration_minutes > 0, Status::InvalidArgument,
              name + ": event duration must be positive");
      break;
    case ArchetypeKind::Schedule:
      require(active_start_hour >= 0 && active_end_hour <= 24 &&
                  active_end_hour > active_start_hour,
              Status::InvalidArgument, name + ": bad active hours");
      require(start_jitter_minutes >= 0 && length_jitter_minutes >= 0,
              Status::InvalidArgument, name + ": jitter must be >= 0");
      for (double p : weekday_use_prob) {
        require(p >= 0.0 && p <= 1.0, Status::InvalidArgument,
                name + ": weekday probabilities must lie in [0,1]");
      }
      break;
  }
}

namespace {

std::size_t series_length(int days, int step_minutes) {
  require(days >= 1, Status::InvalidArgument, "synth: days must be >= 1");
  require(step_minutes >= 1 && 1440 % step_minutes == 0, Status::InvalidArgument,
          "synth: step_minutes must divide a day");
  return static_cast<std::size_t>(days) *
         static_cast<std::size_t>(1440 / step_minutes);
}

// Adds an on-interval [start_min, end_min) to the series. Each reading is
// the mean power over its step, so partially covered steps get a
// proportional value; overlapping intervals saturate at on_watts.
void mark_on(std::vector<double>& series, double start_min, double end_min,
             double watts, int step_minutes) {
  const double step = static_cast<double>(step_minutes);
  const double total = static_cast<double>(series.size()) * step;
  start_min = std::max(0.0, start_min);
  end_min = std::min(total, end_min);
  if (end_min <= start_min) return;
  const std::size_t first = static_cast<std::size_t>(start_min / step);
  std::size_t last = static_cast<std::size_t>(std::ceil(end_min / step));
  last = std::min(last, series.size());
  for (std::size_t i = first; i < last; ++i) {
    const double lo = std::max(start_min, static_cast<double>(i) * step);
    const double hi = std::min(end_min, static_cast<double>(i + 1) * step);
    if (hi <= lo) continue;
    series[i] = std::min(watts, series[i] + watts * (hi - lo) / step);
  }
}

}  // namespace

std::vector<double> gen_cycler(const ApplianceArchetype& a, int days,
                               int step_minutes, std::uint64_t seed) {
  a.validate();
  require(a.kind == ArchetypeKind::Cycler, Status::InvalidArgument,
          a.name + ": gen_cycler wants a cycler archetype");
  std::vector<double> series(series_length(days, step_minutes), 0.0);
  Rng rng(seed);
  const double total_minutes = static_cast<double>(days) * 1440.0;
  const double on_len = a.duty * a.period_minutes;
  // Free-running compressor: each cycle starts where the previous one ended
  // plus jitter, so the phase drifts instead of staying locked to the clock.
  double cycle_start = 0.0;
  while (cycle_start < total_minutes) {
    mark_on(series, cycle_start, cycle_start + on_len, a.on_watts,
            step_minutes);
    const double jitter =
        a.phase_jitter_minutes > 0
            ? rng.uniform(-a.phase_jitter_minutes, a.phase_jitter_minutes)
            : 0.0;
    cycle_start += std::max(on_len, a.period_minutes + jitter);
  }
  return series;
}

std::vector<double> gen_event(const ApplianceArchetype& a, int days,
                              int step_minutes, std::uint64_t seed) {
  a.validate();
  require(a.kind == ArchetypeKind::Event, Status::InvalidArgument,
          a.name + ": gen_event wants an event archetype");
  std::vector<double> series(series_length(days, step_minutes), 0.0);
  Rng rng(seed);
  for (int day = 0; day < days; ++day) {
    const int count = rng.poisson(a.events_per_day);
    const double day_start = static_cast<double>(day) * 1440.0;
    for (int e = 0; e < count; ++e) {
      const double start = day_start + rng.uniform(0.0, 1440.0);
      // pulses clip at the day boundary
      const double end =
          std::min(start + a.event_duration_minutes, day_start + 1440.0);
      mark_on(series, start, end, a.on_watts, step_minutes);
    }
  }
  return series;
}

std::vector<double> gen_schedule(const ApplianceArchetype& a, int days,
                                 int step_minutes, std::uint64_t seed) {
  a.validate();
  require(a.kind == ArchetypeKind::Schedule, Status::InvalidArgument,
          a.name + ": gen_schedule wants a schedule archetype");
  std::vector<double> series(series_length(days, step_minutes), 0.0);
  Rng rng(seed);
  const double base_start = a.active_start_hour * 60.0;
  const double base_len = (a.active_end_hour - a.active_start_hour) * 60.0;
  for (int day = 0; day < days; ++day) {
    // weekday of day index relative to the composed start (Monday) — the
    // caller aligns start_timestamp to the same convention.
    const int weekday = day % 7;
    const double use = rng.uniform();
    if (use >= a.weekday_use_prob[static_cast<std::size_t>(weekday)]) continue;
    const double start_jit =
        a.start_jitter_minutes > 0
            ? rng.uniform(-a.start_jitter_minutes, a.start_jitter_minutes)
            : 0.0;
    const double len_jit =
        a.length_jitter_minutes > 0
            ? rng.uniform(-a.length_jitter_minutes, a.length_jitter_minutes)
            : 0.0;
    const double day_start = static_cast<double>(day) * 1440.0;
    const double on_start = day_start + base_start + start_jit;
    const double on_len = std::max(0.0, base_len + len_jit);
    mark_on(series, on_start, std::min(on_start + on_len, day_start + 1440.0),
            a.on_watts, step_minutes);
  }
  return series;
}

TimeSeriesTable compose_building(const SynthSpec& spec) {
  require(!spec.appliances.empty(), Status::InvalidArgument,
          "compose_building: at least one archetype required");
  require(spec.gap_fraction >= 0.0 && spec.gap_fraction < 1.0,
          Status::InvalidArgument, "compose_building: bad gap fraction");
  // Generators index weekdays as day 0 = Monday, so the table must start at
  // a Monday midnight for schedule probabilities to line up with timestamps.
  require(spec.start_timestamp % 86400 == 0 &&
              utc_weekday(spec.start_timestamp) == 0,
          Status::InvalidArgument,
          "compose_building: start timestamp must be a Monday midnight UTC");
  for (std::size_t i = 0; i < spec.appliances.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.appliances.size(); ++j) {
      require(spec.appliances[i].name != spec.appliances[j].name,
              Status::InvalidArgument,
              "compose_building: duplicate appliance name " +
                  spec.appliances[i].name);
    }
  }

  const std::size_t rows = series_length(spec.days, spec.step_minutes);
  TimeSeriesTable table;
  table.timestamps.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    table.timestamps[r] =
        spec.start_timestamp +
        static_cast<std::int64_t>(r) * 60 * spec.step_minutes;
  }

  for (const ApplianceArchetype& a : spec.appliances) {
    const std::uint64_t child_seed = derive_seed(spec.seed, a.name);
    std::vector<double> series;
    switch (a.kind) {
      case ArchetypeKind::Cycler:
        series = gen_cycler(a, spec.days, spec.step_minutes, child_seed);
        break;
      case ArchetypeKind::Event:
        series = gen_event(a, spec.days, spec.step_minutes, child_seed);
        break;
      case ArchetypeKind::Schedule:
        series = gen_schedule(a, spec.days, spec.step_minutes, child_seed);
        break;
    }
    if (spec.gap_fraction > 0.0) {
      Rng gaps(derive_seed(spec.seed, a.name + "/gaps"));
      for (double& v : series) {
        if (gaps.uniform() < spec.gap_fraction) v = absent();
      }
    }
    table.appliances.push_back(a.name);
    table.columns.push_back(std::move(series));
  }
  return table;
}

std::vector<ApplianceArchetype> default_roster() {
  std::vector<ApplianceArchetype> roster(5);

  roster[0].name = "dishwasher";
  roster[0].kind = ArchetypeKind::Event;
  roster[0].on_watts = 1800.0;
  roster[0].events_per_day = 1.5;
  roster[0].event_duration_minutes = 90.0;

  roster[1].name = "lamp";
  roster[1].kind = ArchetypeKind::Schedule;
  roster[1].on_watts = 60.0;
  roster[1].active_start_hour = 18.0;
  roster[1].active_end_hour = 23.0;
  roster[1].start_jitter_minutes = 30.0;
  roster[1].length_jitter_minutes = 30.0;

  roster[2].name = "fridge";
  roster[2].kind = ArchetypeKind::Cycler;
  roster[2].on_watts = 120.0;
  roster[2].period_minutes = 120.0;
  roster[2].duty = 0.45;
  roster[2].phase_jitter_minutes = 10.0;

  roster[3].name = "radio";
  roster[3].kind = ArchetypeKind::Schedule;
  roster[3].on_watts = 15.0;
  roster[3].active_start_hour = 8.0;
  roster[3].active_end_hour = 12.0;
  roster[3].start_jitter_minutes = 20.0;
  roster[3].length_jitter_minutes = 40.0;

  roster[4].name = "washing_machine";
  roster[4].kind = ArchetypeKind::Event;
  roster[4].on_watts = 2000.0;
  roster[4].events_per_day = 0.8;
  roster[4].event_duration_minutes = 150.0;

  return roster;
}

}  // namespace slf
