/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cyberaggr/errors.hpp"

namespace cyberaggr {

enum class Target { kSocialExclusion, kMaliciousHumour, kGuiltInduction };

inline constexpr std::array<Target, 3> kAllTargets = {
    Target::kSocialExclusion, Target::kMaliciousHumour, Target::kGuiltInduction};

inline std::string_view target_name(Target t) {
  switch (t) {
    case Target::kSocialExclusion:
      return "social_exclusion";
    case Target::kMaliciousHumour:
      return "malicious_humour";
    case Target::kGuiltInduction:
      return "guilt_induction";
  }
  return "";
}

inline std::string_view target_display(Target t) {
  switch (t) {
    case Target::kSocialExclusion:
      return "Social exclusion";
    case Target::kMaliciousHumour:
      return "Malicious humour";
    case Target::kGuiltInduction:
      return "Guilt induction";
  }
  return "";
}

// Short column prefix used in CSV files: se, mh, gi.
inline std::string_view target_prefix(Target t) {
  switch (t) {
    case Target::kSocialExclusion:
      return "se";
    case Target::kMaliciousHumour:
      return "mh";
    case Target::kGuiltInduction:
      return "gi";
  }
  return "";
}

inline Target parse_target(std::string_view s) {
  for (Target t : kAllTargets) {
    if (s == target_name(t) || s == target_prefix(t)) return t;
  }
  throw ValidationError("unknown target \"" + std::string(s) + "\"");
}

/// Ternary aggregation level: -1 low, 0 neutral, +1 high.
using Label = int;

inline constexpr int kNumClasses = 3;
inline constexpr std::array<Label, kNumClasses> kLabels = {-1, 0, 1};

inline constexpr int class_index(Label l) { return l + 1; }
inline constexpr Label label_of(int class_idx) { return class_idx - 1; }

inline bool is_label(long long v) { return v >= -1 && v <= 1; }

}  // namespace cyberaggr
