// Copyright 2026 The hillmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HILL_SCHEDULE_HPP_
#define HILL_SCHEDULE_HPP_

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hill/error.hpp"

namespace hill {

// One no-communication window: sharing is blocked at the end of slots
// start, ..., start + length - 1.
struct Window {
  int start = 0;
  int length = 1;

  int last() const { return start + length - 1; }
  bool operator==(const Window&) const = default;
};

// A communication mechanism over slots {0, ..., horizon}. An empty window
// list is the centralized policy where every slot shares.
class CommSchedule {
 public:
  CommSchedule(int horizon, std::vector<Window> windows = {})
      : horizon_(horizon), windows_(std::move(windows)) {
    validate();
  }

  static CommSchedule centralized(int horizon) { return CommSchedule(horizon); }

  // Blocks sharing on {0, ..., length - 1}.
  static CommSchedule leading_window(int horizon, int length) {
    if (length == 0) return centralized(horizon);
    return CommSchedule(horizon, {Window{0, length}});
  }

  // Blocks every slot except `open_slot`.
  static CommSchedule one_time(int horizon, int open_slot) {
    if (open_slot < 0 || open_slot > horizon) {
      throw ScheduleError("one-time slot outside [0, T]");
    }
    std::vector<Window> w;
    if (open_slot > 0) w.push_back({0, open_slot});
    if (open_slot < horizon) w.push_back({open_slot + 1, horizon - open_slot});
    return CommSchedule(horizon, std::move(w));
  }

  int horizon() const { return horizon_; }
  const std::vector<Window>& windows() const { return windows_; }
  bool is_centralized() const { return windows_.empty(); }

  bool blocked(int t) const {
    for (const auto& w : windows_) {
      if (t >= w.start && t <= w.last()) return true;
    }
    return false;
  }

  // Last slot t <= horizon - 1 whose sharing is permitted, or -1. Sharing at
  // the end of the final slot can never be used, so it is not considered.
  int last_open_slot() const {
    for (int t = horizon_ - 1; t >= 0; --t) {
      if (!blocked(t)) return t;
    }
    return -1;
  }

  nlohmann::json to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& win : windows_) {
      w.push_back({{"start", win.start}, {"len", win.length}});
    }
    return {{"T", horizon_}, {"windows", w}};
  }

  static CommSchedule from_json(const nlohmann::json& j) {
    try {
      std::vector<Window> w;
      for (const auto& item : j.at("windows")) {
        w.push_back({item.at("start").get<int>(), item.at("len").get<int>()});
      }
      return CommSchedule(j.at("T").get<int>(), std::move(w));
    } catch (const nlohmann::json::exception& e) {
      throw ScheduleError(std::string("malformed schedule record: ") + e.what());
    }
  }

  std::string to_string() const { return to_json().dump(); }

  bool operator==(const CommSchedule&) const = default;

 private:
  void validate() const {
    if (horizon_ < 1) throw ScheduleError("horizon T must be >= 1");
    for (std::size_t m = 0; m < windows_.size(); ++m) {
      const auto& w = windows_[m];
      std::ostringstream os;
      os << "window " << m << " {start=" << w.start << ", len=" << w.length
         << "}: ";
      if (w.start < 0) throw ScheduleError(os.str() + "start must be >= 0");
      if (w.length < 1) throw ScheduleError(os.str() + "length must be >= 1");
      if (w.last() > horizon_) {
        throw ScheduleError(os.str() + "window extends past the horizon");
      }
      if (m > 0 && !(w.start > windows_[m - 1].start + windows_[m - 1].length)) {
        throw ScheduleError(os.str() +
                            "windows must be sorted and separated by a "
                            "communication slot");
      }
    }
  }

  int horizon_;
  std::vector<Window> windows_;
};

}  // namespace hill

#endif  // HILL_SCHEDULE_HPP_
