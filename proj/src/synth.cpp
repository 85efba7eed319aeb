#include "guiprep/synth.h"

#include <array>
#include <random>
#include <string>

#include "guiprep/geometry.h"

namespace guiprep {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  // [lo, hi]
  int range(int lo, int hi) {
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& a) {
    return a[static_cast<std::size_t>(range(0, N - 1))];
  }

 private:
  std::mt19937_64 rng_;
};

constexpr std::array<std::pair<int, int>, 4> kScreens = {
    {{1920, 1080}, {1080, 2400}, {1280, 800}, {390, 844}}};
constexpr std::array<const char*, 8> kNouns = {"button", "icon", "link",   "tab",
                                               "field",  "menu", "toggle", "card"};
constexpr std::array<const char*, 8> kWords = {"search", "settings", "cart", "profile",
                                               "home",   "share",    "next", "close"};
constexpr std::array<const char*, 5> kApps = {"Maps", "Gmail", "Calendar", "Chrome",
                                              "Files"};

Action random_body(Draw& d) {
  const auto pt = [&] { return NormPoint::from_milli(d.range(0, 1000), d.range(0, 1000)); };
  switch (d.range(0, 7)) {
    case 0:
    case 1:
      return act::Click{pt()};
    case 2:
      return act::LongPress{pt()};
    case 3:
      return act::Type{std::string(d.pick(kWords)) + " " + d.pick(kWords)};
    case 4:
      return act::Scroll{static_cast<ScrollDirection>(d.range(0, 3))};
    case 5:
      return act::OpenApp{d.pick(kApps)};
    case 6:
      return d.range(0, 1) ? Action(act::NavigateBack{}) : Action(act::NavigateHome{});
    default:
      return act::Wait{};
  }
}

}  // namespace

std::vector<GroundingRecord> synth_grounding(std::uint64_t seed, int records,
                                             int screenshots) {
  Draw d(seed);
  std::vector<ScreenSize> screens;
  for (int i = 0; i < screenshots; ++i) {
    const auto [w, h] = d.pick(kScreens);
    screens.emplace_back(w, h);
  }
  std::vector<GroundingRecord> out;
  if (screenshots <= 0) return out;
  for (int i = 0; i < records; ++i) {
    const int shot = d.range(0, screenshots - 1);
    const ScreenSize& s = screens[static_cast<std::size_t>(shot)];
    const int x1 = d.range(0, s.width() - 2), y1 = d.range(0, s.height() - 2);
    const BBox box{x1, y1, d.range(x1 + 1, std::min(s.width() - 1, x1 + 300)),
                   d.range(y1 + 1, std::min(s.height() - 1, y1 + 120))};
    out.push_back({"synth/shot_" + std::to_string(shot) + ".png", s,
                   std::string(d.pick(kWords)) + " " + d.pick(kNouns), box,
                   normalize_point(box_center(box), s), "synth",
                   SynthesisKind::Unspecified});
  }
  return out;
}

std::vector<Trajectory> synth_trajectories(std::uint64_t seed, int traces) {
  Draw d(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Trajectory> out;
  for (int t = 0; t < traces; ++t) {
    const auto [w, h] = d.pick(kScreens);
    Trajectory tr{"synthetic task " + std::to_string(t), {}, "synth"};
    const int len = d.range(1, 15);
    for (int i = 1; i <= len; ++i) {
      Action a = i == len ? Action(act::Terminate{TerminateStatus::Success}) : random_body(d);
      std::optional<std::string> instruction;
      if (d.range(0, 2) == 0)
        instruction = "Step " + std::to_string(i) + ": " + d.pick(kWords) + " " + d.pick(kNouns);
      tr.steps.push_back({i,
                          {"synth/ep" + std::to_string(t) + "_" + std::to_string(i) + ".png",
                           ScreenSize(w, h)},
                          std::move(a), std::move(instruction)});
    }
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace guiprep
