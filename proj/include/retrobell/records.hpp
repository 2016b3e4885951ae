#pragma once

#include <vector>

#include "retrobell/spin.hpp"
#include "retrobell/vec3.hpp"

namespace retrobell {

enum class Wing : int { first = 1, second = 2 };

/// Plate readout of one particle. true_label is the sampled ontic label, kept
/// for diagnostics only; estimators read inferred_outcome.
struct WingRecord {
  Wing wing = Wing::first;
  Vec3 final_position{};
  Sign inferred_outcome = Sign::plus;
  Sign true_label = Sign::plus;

  friend bool operator==(const WingRecord&, const WingRecord&) = default;
};

struct PairRecord {
  WingRecord first;
  WingRecord second;

  const WingRecord& at(Wing w) const { return w == Wing::first ? first : second; }

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

}  // namespace retrobell
