#include "halving/ingest.hpp"

#include <httplib.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace halving {

namespace {

using json = nlohmann::json;
using Kind = IngestError::Kind;

HeaderRecord record_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw IngestError(Kind::schema, where + "expected a JSON object");
  auto field = [&](const char* name) -> const json& {
    auto it = j.find(name);
    if (it == j.end()) throw IngestError(Kind::schema, where + "missing field \"" + name + "\"");
    return *it;
  };
  const json& height = field("height");
  const json& time = field("time");
  const json& difficulty = field("difficulty");
  if (!height.is_number_unsigned() && !(height.is_number_integer() && height.get<long long>() >= 0))
    throw IngestError(Kind::schema, where + "field \"height\" must be a non-negative integer");
  if (!time.is_number_integer()) throw IngestError(Kind::schema, where + "field \"time\" must be an integer");
  if (!difficulty.is_number() || !(difficulty.get<double>() > 0.0) || !std::isfinite(difficulty.get<double>()))
    throw IngestError(Kind::schema, where + "field \"difficulty\" must be a positive number");
  return {height.get<BlockHeight>(), std::chrono::sys_seconds{std::chrono::seconds{time.get<long long>()}},
          difficulty.get<double>()};
}

// Splits "http://host:port/prefix" into the client base and the path prefix.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = endpoint.find('/', host_start);
  if (slash == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, slash), prefix};
}

}  // namespace

ChainSnapshot make_snapshot(std::vector<HeaderRecord> records) {
  if (records.empty()) throw IngestError(Kind::empty, "empty snapshot");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].height != records[i - 1].height + 1) {
      throw IngestError(Kind::contiguity, "height gap: " + std::to_string(records[i - 1].height) + " followed by " +
                                              std::to_string(records[i].height));
    }
  }
  ChainSnapshot snap;
  snap.recent_ = std::move(records);
  return snap;
}

ChainSnapshot parse_snapshot(std::istream& in) {
  std::vector<HeaderRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IngestError(Kind::parse, where + "invalid JSON (" + e.what() + ")");
    }
    records.push_back(record_from_json(j, where));
    if (records.size() >= 2 && records.back().height != records[records.size() - 2].height + 1) {
      throw IngestError(Kind::contiguity, where + "height gap: " + std::to_string(records[records.size() - 2].height) +
                                              " followed by " + std::to_string(records.back().height));
    }
  }
  return make_snapshot(std::move(records));
}

ChainSnapshot load_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(Kind::io, "cannot open snapshot file: " + path.string());
  return parse_snapshot(in);
}

void write_snapshot(std::ostream& out, const ChainSnapshot& snap) {
  for (const auto& r : snap.recent()) {
    json j = {{"height", r.height}, {"time", r.time.time_since_epoch().count()}, {"difficulty", r.difficulty}};
    out << j.dump() << '\n';
  }
}

void write_snapshot_file(const std::filesystem::path& path, const ChainSnapshot& snap) {
  std::ofstream out(path);
  if (!out) throw IngestError(Kind::io, "cannot write snapshot file: " + path.string());
  write_snapshot(out, snap);
  if (!out) throw IngestError(Kind::io, "failed writing snapshot file: " + path.string());
}

ChainSnapshot fetch_snapshot_http(const std::string& endpoint, std::size_t window,
                                  std::chrono::milliseconds timeout) {
  if (window == 0) throw IngestError(Kind::precondition, "window must be positive");
  const auto [base, prefix] = split_endpoint(endpoint);
  httplib::Client client(base);
  if (!client.is_valid()) throw IngestError(Kind::connection, "invalid endpoint: " + endpoint);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);

  const std::string path = prefix + "/headers?count=" + std::to_string(window);
  auto res = client.Get(path);
  if (!res) throw IngestError(Kind::connection, "GET " + endpoint + path + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw IngestError(Kind::http_status, "GET " + path + " returned HTTP " + std::to_string(res->status));

  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw IngestError(Kind::parse, std::string("malformed response: ") + e.what());
  }
  if (!body.is_array()) throw IngestError(Kind::schema, "response is not a JSON array");

  std::vector<HeaderRecord> records;
  records.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i)
    records.push_back(record_from_json(body[i], "element " + std::to_string(i) + ": "));
  if (records.size() > window) records.erase(records.begin(), records.end() - static_cast<std::ptrdiff_t>(window));
  return make_snapshot(std::move(records));
}

Hashrate estimate_hashrate(const ChainSnapshot& snap) {
  if (snap.size() < 2) throw IngestError(Kind::precondition, "hashrate estimate needs at least two blocks");
  const double elapsed_minutes =
      std::chrono::duration<double, std::ratio<60>>(snap.tip().time - snap.first().time).count();
  if (!(elapsed_minutes > 0.0))
    throw IngestError(Kind::clock_skew, "non-positive elapsed time across the snapshot (timestamp skew)");
  double difficulty_sum = 0.0;
  for (const auto& r : snap.recent()) difficulty_sum += r.difficulty;
  const double mean_difficulty = difficulty_sum / static_cast<double>(snap.size());
  return Hashrate{kHashesPerDifficulty * mean_difficulty * static_cast<double>(snap.size() - 1) / elapsed_minutes};
}

ModelInputs model_inputs(BlockHeight tip, const RetargetParams& params) {
  const BlockHeight halving = next_halving_height(tip);
  return {halving - tip, halving, position_from_heights(tip, halving, params)};
}

ModelInputs model_inputs(const ChainSnapshot& snap, const RetargetParams& params) {
  return model_inputs(snap.tip().height, params);
}

ChainSnapshot snapshot_from_simulation(std::span<const SimulatedBlock> blocks, std::chrono::sys_seconds start) {
  std::vector<HeaderRecord> records;
  records.reserve(blocks.size());
  for (const auto& b : blocks) {
    const auto offset = std::chrono::seconds{std::llround(b.time_minutes * 60.0)};
    records.push_back({b.height, start + offset, b.difficulty});
  }
  return make_snapshot(std::move(records));
}

}  // namespace halving
