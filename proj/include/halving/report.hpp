#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "halving/naive.hpp"
#include "halving/units.hpp"

namespace halving {

enum class Model { naive, retarget };

std::string_view to_string(Model m);
Model parse_model(std::string_view s);

/// What predict and adjust print. Minutes are measured from the reference
/// time `now` when one is known.
struct OutputReport {
  Model model = Model::retarget;
  std::optional<Timestamp> now;
  Duration eta;
  double variance = 0.0;
  Duration stddev;
  std::vector<ConfidenceInterval> intervals;
  std::optional<Duration> shift;
  std::vector<std::string> warnings;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const OutputReport& r);
std::string render_text(const OutputReport& r);

}  // namespace halving
