#include "halving/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace halving {

namespace {

std::string percent(double level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", level * 100.0);
  return buf;
}

std::string fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view to_string(Model m) { return m == Model::naive ? "naive" : "retarget"; }

Model parse_model(std::string_view s) {
  if (s == "naive") return Model::naive;
  if (s == "retarget") return Model::retarget;
  throw std::invalid_argument("unknown model: " + std::string(s));
}

nlohmann::ordered_json to_json(const OutputReport& r) {
  using json = nlohmann::ordered_json;
  auto stamp = [&](Duration d) -> json {
    if (!r.now) return nullptr;
    return format_timestamp(add_duration(*r.now, d));
  };
  json j;
  j["model"] = to_string(r.model);
  j["eta_minutes"] = r.eta.minutes;
  j["eta_timestamp"] = stamp(r.eta);
  j["variance_minutes2"] = r.variance;
  j["stddev_minutes"] = r.stddev.minutes;
  j["intervals"] = json::array();
  for (const auto& ci : r.intervals) {
    j["intervals"].push_back({{"level", ci.level},
                              {"lower_minutes", ci.lower.minutes},
                              {"upper_minutes", ci.upper.minutes},
                              {"lower_timestamp", stamp(ci.lower)},
                              {"upper_timestamp", stamp(ci.upper)}});
  }
  j["shift_minutes"] = r.shift ? json(r.shift->minutes) : json(nullptr);
  j["warnings"] = r.warnings;
  j["inputs"] = r.inputs;
  return j;
}

std::string render_text(const OutputReport& r) {
  std::ostringstream out;
  auto when = [&](Duration d) { return r.now ? " -> " + format_timestamp(add_duration(*r.now, d)) : std::string{}; };
  out << "model:   " << to_string(r.model) << '\n';
  if (r.now) out << "now:     " << format_timestamp(*r.now) << " UTC\n";
  if (r.shift) out << "shift:   " << fixed(r.shift->minutes) << " min (" << format_duration(*r.shift) << ")\n";
  out << "eta:     " << fixed(r.eta.minutes) << " min (" << format_duration(r.eta) << ")" << when(r.eta) << '\n';
  out << "stddev:  " << fixed(r.stddev.minutes) << " min (" << format_duration(r.stddev) << ")\n";
  out << "variance: " << fixed(r.variance) << " min^2\n";
  for (const auto& ci : r.intervals) {
    out << percent(ci.level) << " interval: [" << fixed(ci.lower.minutes) << ", " << fixed(ci.upper.minutes) << "] min";
    if (r.now) {
      out << " -> " << format_timestamp(add_duration(*r.now, ci.lower)) << " .. "
          << format_timestamp(add_duration(*r.now, ci.upper));
    }
    out << '\n';
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace halving
