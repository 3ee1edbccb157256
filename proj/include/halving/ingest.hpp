#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "halving/hashrate.hpp"
#include "halving/retarget.hpp"
#include "halving/schedule.hpp"
#include "halving/simulator.hpp"

namespace halving {

struct HeaderRecord {
  BlockHeight height = 0;
  std::chrono::sys_seconds time{};
  double difficulty = 0.0;

  friend bool operator==(const HeaderRecord&, const HeaderRecord&) = default;
};

/// Recent headers in ascending, contiguous height order, ending at the tip.
/// Construct through make_snapshot, which enforces that.
class ChainSnapshot {
 public:
  const HeaderRecord& tip() const { return recent_.back(); }
  const HeaderRecord& first() const { return recent_.front(); }
  std::span<const HeaderRecord> recent() const { return recent_; }
  std::size_t size() const { return recent_.size(); }

  friend bool operator==(const ChainSnapshot&, const ChainSnapshot&) = default;

 private:
  friend ChainSnapshot make_snapshot(std::vector<HeaderRecord> records);
  std::vector<HeaderRecord> recent_;
};

class IngestError : public std::runtime_error {
 public:
  enum class Kind { io, empty, parse, schema, contiguity, connection, http_status, clock_skew, precondition };

  IngestError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Validates ordering and contiguity. Throws IngestError.
ChainSnapshot make_snapshot(std::vector<HeaderRecord> records);

/// One JSON object per line: {"height": int, "time": unix seconds, "difficulty": number}.
/// Blank lines are ignored; errors carry the 1-based line number.
ChainSnapshot parse_snapshot(std::istream& in);
ChainSnapshot load_snapshot_file(const std::filesystem::path& path);

void write_snapshot(std::ostream& out, const ChainSnapshot& snap);
void write_snapshot_file(const std::filesystem::path& path, const ChainSnapshot& snap);

/// GET <endpoint>/headers?count=<window>, expecting a JSON array of header
/// objects ascending to the tip. Only the last `window` entries are kept.
ChainSnapshot fetch_snapshot_http(const std::string& endpoint, std::size_t window,
                                  std::chrono::milliseconds timeout = std::chrono::seconds(10));

/// H = 2^32 * mean(D) * (blocks - 1) / elapsed, in hashes per minute.
Hashrate estimate_hashrate(const ChainSnapshot& snap);

struct ModelInputs {
  std::uint64_t blocks_remaining = 0;
  BlockHeight halving_height = 0;
  RetargetPosition position;
};

ModelInputs model_inputs(BlockHeight tip_height, const RetargetParams& params);
ModelInputs model_inputs(const ChainSnapshot& snap, const RetargetParams& params);

/// Converts simulator output to a snapshot with the first block at `start`;
/// times are rounded to whole seconds.
ChainSnapshot snapshot_from_simulation(std::span<const SimulatedBlock> blocks, std::chrono::sys_seconds start);

}  // namespace halving
