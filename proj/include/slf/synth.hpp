#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slf/timeseries.hpp"

namespace slf {

enum class ArchetypeKind { Cycler, Event, Schedule };

ArchetypeKind archetype_kind_from_string(const std::string& s);
const char* archetype_kind_name(ArchetypeKind k);

// A synthetic appliance of known structure. on_watts must stay within the
// 10..2000 W range of real appliance draw.
struct ApplianceArchetype {
  std::string name;
  ArchetypeKind kind = ArchetypeKind::Cycler;
  double on_watts = 100.0;
  std::uint64_t seed = 0;  // filled in by compose_building

  // cycler: square-wave compressor duty cycle
  double period_minutes = 120.0;
  double duty = 0.45;
  double phase_jitter_minutes = 10.0;

  // event: Poisson daily count of fixed-duration pulses
  double events_per_day = 1.0;
  double event_duration_minutes = 90.0;

  // schedule: one daily on-window inside the active hours
  double active_start_hour = 18.0;
  double active_end_hour = 23.0;
  double start_jitter_minutes = 30.0;
  double length_jitter_minutes = 30.0;
  std::array<double, 7> weekday_use_prob{1, 1, 1, 1, 1, 1, 1};  // Monday first

  void validate() const;
};

std::vector<double> gen_cycler(const ApplianceArchetype& a, int days,
                               int step_minutes, std::uint64_t seed);
std::vector<double> gen_event(const ApplianceArchetype& a, int days,
                              int step_minutes, std::uint64_t seed);
std::vector<double> gen_schedule(const ApplianceArchetype& a, int days,
                                 int step_minutes, std::uint64_t seed);

struct SynthSpec {
  std::vector<ApplianceArchetype> appliances;
  int days = 160;
  int step_minutes = 1;
  double gap_fraction = 0.0;     // uniform random missing-data injection
  std::uint64_t seed = 1;
  std::int64_t start_timestamp = 1388966400;  // 2014-01-06T00:00:00Z, a Monday
};

// One column per appliance; per-appliance seeds derived from the master seed
// and the appliance name, so assembly order never matters.
TimeSeriesTable compose_building(const SynthSpec& spec);

// The five-appliance roster mirroring a real monitored household:
// dishwasher + washing machine (events), fridge (cycler), lamp + radio
// (schedules).
std::vector<ApplianceArchetype> default_roster();

}  // namespace slf
