#pragma once

#include "hawknet/model.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hawknet {

// Source column names. `category` is only read when an include list is given.
struct ColumnMap {
    std::string time{"DATE_TIME_OCC"};
    std::string lat{"LAT"};
    std::string lon{"LON"};
    std::string area{"AREA_NAME"};
    std::string category{"CRM_CD_DESC"};
};

struct RawRecord {
    double timestamp{0.0}; // days since 1970-01-01 00:00 (no time zone handling)
    double lat{0.0};
    double lon{0.0};
    std::string area_id;
    friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct Reject {
    std::size_t line{0}; // 1-based physical line of the record start
    std::string reason;
};

struct LoadResult {
    std::vector<RawRecord> records;
    std::vector<Reject> rejects;
    std::size_t filtered{0}; // rows dropped by the include list
};

// Splits CSV text into records (RFC 4180 quoting; CRLF or LF line ends).
// Each entry carries the 1-based line where the record starts.
struct CsvRow {
    std::size_t line{0};
    std::vector<std::string> fields;
};
[[nodiscard]] std::vector<CsvRow> parse_csv(std::string_view text);

// Accepts "YYYY-MM-DD[ T]HH:MM[:SS[.fff]]", "YYYY-MM-DD" and
// "MM/DD/YYYY [HH:MM[:SS]] [AM|PM]". Returns days since the Unix epoch.
[[nodiscard]] std::optional<double> parse_timestamp(std::string_view text);

// Throws IoFailure, EmptyFile (no data rows) and MissingColumn. Rows that fail
// to parse, sit outside lat/lon ranges or carry the (0, 0) placeholder
// (|lat| < 1) land in `rejects`. A non-empty include list keeps only rows
// whose category column matches one of its entries exactly.
[[nodiscard]] LoadResult load_csv(const std::filesystem::path& path, const ColumnMap& columns = {},
                                  const std::vector<std::string>& include = {});

// Local equirectangular projection in kilometres about the origin.
struct ProjectionSpec {
    double origin_lat{0.0};
    double origin_lon{0.0};

    static constexpr double km_per_deg_lat = 110.574;
    static constexpr double km_per_deg_lon_equator = 111.320;

    [[nodiscard]] double km_per_deg_lon() const;
    [[nodiscard]] Point forward(double lat, double lon) const;
    // Returns {lat, lon}.
    [[nodiscard]] std::pair<double, double> inverse(Point p) const;
};

// Origin at the centre of the records' bounding box. Throws EmptyFile.
[[nodiscard]] ProjectionSpec centered_projection(const std::vector<RawRecord>& records);

using AreaIndex = std::map<std::string, std::size_t>;

// Sorted distinct area ids numbered 0..k-1.
[[nodiscard]] AreaIndex build_area_index(const std::vector<RawRecord>& records);
[[nodiscard]] std::vector<std::string> area_names(const AreaIndex& index);
[[nodiscard]] nlohmann::json area_index_to_json(const AreaIndex& index);
[[nodiscard]] AreaIndex area_index_from_json(const nlohmann::json& doc);
void write_area_index(const std::filesystem::path& path, const AreaIndex& index);
[[nodiscard]] AreaIndex read_area_index(const std::filesystem::path& path);

// t = days since the earliest timestamp, (x, y) projected, node from the
// index; sorted, horizon = max t. Throws UnknownArea, EmptyFile, and
// InvalidArgument when the origin lies outside the records' bounding box.
[[nodiscard]] History to_history(const std::vector<RawRecord>& records, const ProjectionSpec& proj,
                                 const AreaIndex& index);

} // namespace hawknet
