#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "guiprep/records.h"

namespace guiprep {

inline constexpr const char* kGroundingData = "grounding";
inline constexpr const char* kPlanningData = "planning";

struct StatsRow {
  std::string source_tag;  // "total" for the summary row
  std::string data_type;   // grounding | planning | all
  std::uint64_t elements = 0;
  std::uint64_t screenshots = 0;  // distinct refs
  std::uint64_t traces = 0;
  std::uint64_t steps = 0;
  // Mean trace length in tenths, rounded half up; absent without traces.
  std::optional<std::uint64_t> avg_steps_tenths;
};

struct StatsReport {
  std::vector<StatsRow> rows;  // ordered by (source_tag, data_type)
  StatsRow total;
};

// Mean in tenths: floor((10 * steps / traces) + 1/2) in integer arithmetic.
std::optional<std::uint64_t> avg_tenths(std::uint64_t steps, std::uint64_t traces);

// "8.5"
std::string format_tenths(std::uint64_t tenths);

class StatsAccumulator {
 public:
  void add(const GroundingRecord& r);
  void add(const Trajectory& t);
  void merge(const StatsAccumulator& other);
  StatsReport report() const;

 private:
  struct Acc {
    std::uint64_t elements = 0;
    std::uint64_t traces = 0;
    std::uint64_t steps = 0;
    std::set<std::string> shots;
  };
  std::map<std::pair<std::string, std::string>, Acc> rows_;
};

StatsReport compute_stats(const std::vector<GroundingRecord>& grounding,
                          const std::vector<Trajectory>& trajectories);

std::string stats_json(const StatsReport& r);
std::string stats_table(const StatsReport& r);

}  // namespace guiprep
