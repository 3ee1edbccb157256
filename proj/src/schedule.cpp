#include "halving/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace halving {

double subsidy_at_height(BlockHeight h) {
  return std::ldexp(kInitialSubsidy, -static_cast<int>(std::min<BlockHeight>(h / kHalvingInterval, 2000)));
}

BlockHeight next_halving_height(BlockHeight h) {
  return (h / kHalvingInterval + 1) * kHalvingInterval;
}

double total_supply_limit() {
  // 210000 * 50 * sum 2^-i = 210000 * 50 * 2
  return static_cast<double>(kHalvingInterval) * kInitialSubsidy * 2.0;
}

double partial_supply(unsigned epochs) {
  double sum = 0.0;
  for (unsigned i = 0; i < epochs && i < 2000; ++i)
    sum += static_cast<double>(kHalvingInterval) * std::ldexp(kInitialSubsidy, -static_cast<int>(i));
  return sum;
}

std::vector<ScheduleRow> schedule_table(unsigned last_epoch) {
  std::vector<ScheduleRow> rows;
  rows.reserve(last_epoch + 1);
  for (unsigned e = 0; e <= last_epoch; ++e) {
    const BlockHeight start = static_cast<BlockHeight>(e) * kHalvingInterval;
    rows.push_back({e, start, subsidy_at_height(start), partial_supply(e + 1)});
  }
  return rows;
}

}  // namespace halving
