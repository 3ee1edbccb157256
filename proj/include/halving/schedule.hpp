#pragma once

#include <cstdint>
#include <vector>

namespace halving {

using BlockHeight = std::uint64_t;

inline constexpr BlockHeight kHalvingInterval = 210000;
inline constexpr double kInitialSubsidy = 50.0;

/// Idealized subsidy 50 * 2^-floor(h / 210000) BTC. No satoshi truncation.
double subsidy_at_height(BlockHeight h);

/// Smallest positive multiple of 210000 strictly greater than h.
BlockHeight next_halving_height(BlockHeight h);

/// Limit of the geometric supply series: 21,000,000 BTC.
double total_supply_limit();

/// Coins issued by the first `epochs` complete halving epochs.
double partial_supply(unsigned epochs);

struct ScheduleRow {
  unsigned epoch;
  BlockHeight start_height;
  double subsidy;
  double cumulative_supply;  // after the epoch completes
};

/// Rows for epochs 0..last_epoch inclusive.
std::vector<ScheduleRow> schedule_table(unsigned last_epoch);

}  // namespace halving
