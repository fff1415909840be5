#pragma once

#include "hawknet/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace hawknet {

// Model parameter document:
//   { "n", "omega", "sigma", "convention": "raw" | "normalized",
//     "A": [row-major n*n],
//     "background": { "kind": "single_gaussian", "mu": [...], "sigma0" }
//                 | { "kind": "weighted_kde", "beta": [row-major n*N], "delta", "window",
//                     "anchors": [[x, y], ...] } }
// "normalized" means A was fitted under the unit-mass temporal kernel and is
// converted on load. Writers always emit "raw".
[[nodiscard]] nlohmann::json params_to_json(const NetworkParams& params);
[[nodiscard]] NetworkParams params_from_json(const nlohmann::json& doc);
[[nodiscard]] NetworkParams read_params(const std::filesystem::path& path);
void write_params(const std::filesystem::path& path, const NetworkParams& params);

// Event trace CSV with header `t,x,y,node`.
void write_events_csv(std::ostream& out, const std::vector<Event>& events);
void write_events_csv(const std::filesystem::path& path, const std::vector<Event>& events);
[[nodiscard]] std::vector<Event> read_events_csv(const std::filesystem::path& path);

// History from an event CSV; horizon defaults to the last event time.
[[nodiscard]] History read_history(const std::filesystem::path& path, double horizon = -1.0);

// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
// Fixed-point text with the given number of decimals.
[[nodiscard]] std::string format_fixed(double v, int decimals);

} // namespace hawknet
