#include "guiprep/corpus_stats.h"

#include <algorithm>
#include <array>

#include "guiprep/canonical.h"

namespace guiprep {

namespace {

std::string row_json(const StatsRow& r) {
  JsonLine line;
  line.field("source_tag", r.source_tag)
      .field("data_type", r.data_type)
      .field("elements", static_cast<std::int64_t>(r.elements))
      .field("screenshots", static_cast<std::int64_t>(r.screenshots))
      .field("traces", static_cast<std::int64_t>(r.traces))
      .field("steps", static_cast<std::int64_t>(r.steps));
  if (r.avg_steps_tenths)
    line.raw("avg_steps", format_tenths(*r.avg_steps_tenths));
  else
    line.null("avg_steps");
  return line.str();
}

}  // namespace

std::optional<std::uint64_t> avg_tenths(std::uint64_t steps, std::uint64_t traces) {
  if (!traces) return std::nullopt;
  return (20 * steps + traces) / (2 * traces);
}

std::string format_tenths(std::uint64_t tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

void StatsAccumulator::add(const GroundingRecord& r) {
  auto& a = rows_[{r.source_tag, kGroundingData}];
  ++a.elements;
  a.shots.insert(r.screenshot_ref);
}

void StatsAccumulator::add(const Trajectory& t) {
  auto& a = rows_[{t.source_tag, kPlanningData}];
  ++a.traces;
  a.steps += t.steps.size();
  for (const auto& s : t.steps) a.shots.insert(s.observation.screenshot_ref);
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  for (const auto& [key, o] : other.rows_) {
    auto& a = rows_[key];
    a.elements += o.elements;
    a.traces += o.traces;
    a.steps += o.steps;
    a.shots.insert(o.shots.begin(), o.shots.end());
  }
}

StatsReport StatsAccumulator::report() const {
  StatsReport r;
  r.total.source_tag = "total";
  r.total.data_type = "all";
  std::set<std::string_view> all_shots;
  for (const auto& [key, a] : rows_) {
    StatsRow row{key.first, key.second, a.elements, a.shots.size(),
                 a.traces,  a.steps,    avg_tenths(a.steps, a.traces)};
    r.total.elements += a.elements;
    r.total.traces += a.traces;
    r.total.steps += a.steps;
    all_shots.insert(a.shots.begin(), a.shots.end());
    r.rows.push_back(std::move(row));
  }
  r.total.screenshots = all_shots.size();
  r.total.avg_steps_tenths = avg_tenths(r.total.steps, r.total.traces);
  return r;
}

StatsReport compute_stats(const std::vector<GroundingRecord>& grounding,
                          const std::vector<Trajectory>& trajectories) {
  StatsAccumulator acc;
  for (const auto& g : grounding) acc.add(g);
  for (const auto& t : trajectories) acc.add(t);
  return acc.report();
}

std::string stats_json(const StatsReport& r) {
  std::string rows = "[";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i) rows += ",";
    rows += row_json(r.rows[i]);
  }
  rows += "]";
  return JsonLine().raw("rows", rows).raw("total", row_json(r.total)).str();
}

std::string stats_table(const StatsReport& r) {
  using Cells = std::array<std::string, 6>;
  std::vector<Cells> lines = {
      {"source_tag", "data_type", "elements", "screenshots", "traces", "avg_steps"}};
  auto cells = [](const StatsRow& row) {
    return Cells{row.source_tag,
                 row.data_type,
                 std::to_string(row.elements),
                 std::to_string(row.screenshots),
                 std::to_string(row.traces),
                 row.avg_steps_tenths ? format_tenths(*row.avg_steps_tenths) : "-"};
  };
  for (const auto& row : r.rows) lines.push_back(cells(row));
  lines.push_back(cells(r.total));

  std::array<std::size_t, 6> width{};
  for (const auto& l : lines)
    for (std::size_t c = 0; c < 6; ++c) width[c] = std::max(width[c], l[c].size());

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i + 1 == lines.size()) {
      std::size_t total_width = 0;
      for (auto w : width) total_width += w;
      out += std::string(total_width + 2 * 5, '-') + "\n";
    }
    std::string line;
    for (std::size_t c = 0; c < 6; ++c) {
      const auto& v = lines[i][c];
      const std::string pad(width[c] - v.size(), ' ');
      line += c < 2 ? v + pad : pad + v;  // text left, numbers right
      if (c < 5) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace guiprep
