#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdflp/instance.hpp"

namespace cdflp {

struct cap_exceeded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kDefaultScheduleCap = 20000;

// All subsets of {0..locationCount-1} with size 0..budget, ordered by size
// then lexicographically by sorted ids; the empty set comes first. This is
// the per-period digit order of the schedule stream.
inline std::vector<std::vector<int>> period_choices(int locationCount, int budget) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  std::vector<int> pick;
  for (int size = 1; size <= budget && size <= locationCount; ++size) {
    pick.assign(size, 0);
    for (int k = 0; k < size; ++k) pick[k] = k;
    while (true) {
      out.push_back(pick);
      int k = size - 1;
      while (k >= 0 && pick[k] == locationCount - size + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int m = k + 1; m < size; ++m) pick[m] = pick[m - 1] + 1;
    }
  }
  return out;
}

// Deterministic stream of every budget-feasible schedule, addressed by a
// mixed-radix index: period 1 is the most significant digit, so index order
// is period-major lexicographic with the all-empty schedule at index 0.
class ScheduleEnumerator {
 public:
  ScheduleEnumerator(const Instance& inst, int budget)
      : periods_(inst.periodCount), choices_(period_choices(inst.locationCount, budget)) {
    if (budget < 1) throw std::invalid_argument("ScheduleEnumerator: budget must be >= 1");
    count_ = 1;
    for (int t = 0; t < periods_; ++t) {
      if (count_ > INT64_MAX / static_cast<std::int64_t>(choices_.size()))
        throw std::overflow_error("ScheduleEnumerator: schedule space too large");
      count_ *= static_cast<std::int64_t>(choices_.size());
    }
  }

  std::int64_t count() const { return count_; }

  Schedule at(std::int64_t index) const {
    if (index < 0 || index >= count_) throw std::out_of_range("ScheduleEnumerator: bad index");
    Schedule s(periods_);
    const auto radix = static_cast<std::int64_t>(choices_.size());
    for (int t = periods_ - 1; t >= 0; --t) {
      s.open[t] = choices_[index % radix];
      index /= radix;
    }
    return s;
  }

  std::int64_t index_of(const Schedule& s) const {
    const auto radix = static_cast<std::int64_t>(choices_.size());
    std::int64_t idx = 0;
    for (int t = 0; t < periods_; ++t) {
      std::int64_t digit = -1;
      for (std::size_t c = 0; c < choices_.size(); ++c)
        if (choices_[c] == s.open[t]) {
          digit = static_cast<std::int64_t>(c);
          break;
        }
      if (digit < 0) throw std::invalid_argument("index_of: schedule not in stream");
      idx = idx * radix + digit;
    }
    return idx;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::int64_t i = 0; i < count_; ++i) fn(at(i));
  }

 private:
  int periods_;
  std::vector<std::vector<int>> choices_;
  std::int64_t count_ = 0;
};

inline void check_enumeration_cap(std::int64_t count, std::int64_t cap) {
  if (count > cap)
    throw cap_exceeded_error("enumeration cap exceeded: " + std::to_string(count) +
                             " schedules > cap " + std::to_string(cap));
}

}  // namespace cdflp
