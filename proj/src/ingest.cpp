#include "hawknet/ingest.hpp"

#include "hawknet/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace hawknet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<double> to_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Reads exactly `width` digits (or 1..width when width is negative).
bool read_int(std::string_view& s, int width, int& out) {
    const std::size_t max_digits = static_cast<std::size_t>(std::abs(width));
    std::size_t len = 0;
    while (len < s.size() && len < max_digits && s[len] >= '0' && s[len] <= '9') ++len;
    if (len == 0 || (width > 0 && len != max_digits)) return false;
    std::from_chars(s.data(), s.data() + len, out);
    s.remove_prefix(len);
    return true;
}

bool expect(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

// HH:MM[:SS[.fff]] -> seconds of day.
std::optional<double> read_clock(std::string_view& s) {
    int hh = 0;
    int mm = 0;
    if (!read_int(s, -2, hh) || !expect(s, ':') || !read_int(s, 2, mm)) return std::nullopt;
    double sec = 0.0;
    if (expect(s, ':')) {
        int whole = 0;
        if (!read_int(s, 2, whole)) return std::nullopt;
        sec = whole;
        if (expect(s, '.')) {
            double scale = 0.1;
            if (s.empty() || s.front() < '0' || s.front() > '9') return std::nullopt;
            while (!s.empty() && s.front() >= '0' && s.front() <= '9') {
                sec += scale * (s.front() - '0');
                scale *= 0.1;
                s.remove_prefix(1);
            }
        }
    }
    if (hh > 23 || mm > 59 || sec >= 60.0) return std::nullopt;
    return hh * 3600.0 + mm * 60.0 + sec;
}

std::optional<double> civil_days(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return static_cast<double>(sys_days{ymd}.time_since_epoch().count());
}

double parse_coord(std::string_view s, bool& ok) {
    const auto v = to_number(s);
    ok = v.has_value();
    return v.value_or(0.0);
}

} // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    std::size_t line = 1;
    row.line = 1;
    bool quoted = false;
    bool any = false; // current record has content
    auto end_record = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !any;
        if (!blank) rows.push_back(std::move(row));
        row = CsvRow{};
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            quoted = true;
            any = true;
            break;
        case ',':
            row.fields.push_back(std::move(field));
            field.clear();
            any = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            row.line = line;
            break;
        default:
            field.push_back(c);
            any = true;
        }
    }
    if (any || !field.empty()) end_record();
    return rows;
}

std::optional<double> parse_timestamp(std::string_view text) {
    std::string_view s = trim(text);
    int y = 0;
    int m = 0;
    int d = 0;
    std::optional<double> day;
    std::optional<double> secs = 0.0;
    if (s.size() >= 10 && s[4] == '-') {
        if (!read_int(s, 4, y) || !expect(s, '-') || !read_int(s, 2, m) || !expect(s, '-') || !read_int(s, 2, d)) {
            return std::nullopt;
        }
        day = civil_days(y, m, d);
        if (!s.empty()) {
            if (s.front() != 'T' && s.front() != ' ') return std::nullopt;
            s.remove_prefix(1);
            secs = read_clock(s);
            if (!s.empty() && s.front() == 'Z') s.remove_prefix(1);
        }
        if (!secs || !s.empty()) return std::nullopt;
    } else {
        if (!read_int(s, -2, m) || !expect(s, '/') || !read_int(s, -2, d) || !expect(s, '/') || !read_int(s, 4, y)) {
            return std::nullopt;
        }
        day = civil_days(y, m, d);
        s = trim(s);
        if (!s.empty()) {
            secs = read_clock(s);
            if (!secs) return std::nullopt;
            s = trim(s);
            if (s == "AM" || s == "PM") {
                const double hour = std::floor(*secs / 3600.0);
                if (hour < 1.0 || hour > 12.0) return std::nullopt;
                if (hour == 12.0) *secs -= 12.0 * 3600.0;
                if (s == "PM") *secs += 12.0 * 3600.0;
            } else if (!s.empty()) {
                return std::nullopt;
            }
        }
    }
    if (!day) return std::nullopt;
    return *day + *secs / 86400.0;
}

LoadResult load_csv(const std::filesystem::path& path, const ColumnMap& columns, const std::vector<std::string>& include) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
    const std::vector<CsvRow> rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorCode::EmptyFile, path.string() + " has no header");

    const auto& header = rows.front().fields;
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return i;
        throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in " + path.string());
    };
    const std::size_t c_time = column(columns.time);
    const std::size_t c_lat = column(columns.lat);
    const std::size_t c_lon = column(columns.lon);
    const std::size_t c_area = column(columns.area);
    const std::size_t c_cat = include.empty() ? 0 : column(columns.category);
    const std::size_t needed = std::max({c_time, c_lat, c_lon, c_area, c_cat}) + 1;

    if (rows.size() == 1) throw Error(ErrorCode::EmptyFile, path.string() + " has a header but no rows");
    LoadResult out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        auto reject = [&](std::string why) { out.rejects.push_back({row.line, std::move(why)}); };
        if (row.fields.size() < needed) {
            reject("expected at least " + std::to_string(needed) + " fields, found " + std::to_string(row.fields.size()));
            continue;
        }
        if (!include.empty() && std::find(include.begin(), include.end(), row.fields[c_cat]) == include.end()) {
            ++out.filtered;
            continue;
        }
        RawRecord rec;
        const auto ts = parse_timestamp(row.fields[c_time]);
        if (!ts) {
            reject("unparseable timestamp '" + row.fields[c_time] + "'");
            continue;
        }
        rec.timestamp = *ts;
        bool ok_lat = false;
        bool ok_lon = false;
        rec.lat = parse_coord(row.fields[c_lat], ok_lat);
        rec.lon = parse_coord(row.fields[c_lon], ok_lon);
        if (!ok_lat || !ok_lon) {
            reject("unparseable coordinates");
            continue;
        }
        if (std::abs(rec.lat) > 90.0 || std::abs(rec.lon) > 180.0) {
            reject("coordinates out of range");
            continue;
        }
        if (std::abs(rec.lat) < 1.0) {
            reject("placeholder coordinates");
            continue;
        }
        rec.area_id = std::string(trim(row.fields[c_area]));
        if (rec.area_id.empty()) {
            reject("empty area");
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

double ProjectionSpec::km_per_deg_lon() const {
    return km_per_deg_lon_equator * std::cos(origin_lat * std::numbers::pi / 180.0);
}

Point ProjectionSpec::forward(double lat, double lon) const {
    return {(lon - origin_lon) * km_per_deg_lon(), (lat - origin_lat) * km_per_deg_lat};
}

std::pair<double, double> ProjectionSpec::inverse(Point p) const {
    return {origin_lat + p.y / km_per_deg_lat, origin_lon + p.x / km_per_deg_lon()};
}

ProjectionSpec centered_projection(const std::vector<RawRecord>& records) {
    if (records.empty()) throw Error(ErrorCode::EmptyFile, "no records to project");
    auto [lat_lo, lat_hi] = std::minmax_element(records.begin(), records.end(),
                                                [](const RawRecord& a, const RawRecord& b) { return a.lat < b.lat; });
    auto [lon_lo, lon_hi] = std::minmax_element(records.begin(), records.end(),
                                                [](const RawRecord& a, const RawRecord& b) { return a.lon < b.lon; });
    return {0.5 * (lat_lo->lat + lat_hi->lat), 0.5 * (lon_lo->lon + lon_hi->lon)};
}

AreaIndex build_area_index(const std::vector<RawRecord>& records) {
    AreaIndex index;
    for (const RawRecord& r : records) index.emplace(r.area_id, 0);
    std::size_t next = 0;
    for (auto& [name, id] : index) id = next++;
    return index;
}

std::vector<std::string> area_names(const AreaIndex& index) {
    std::vector<std::string> names(index.size());
    for (const auto& [name, id] : index) {
        if (id >= names.size()) throw Error(ErrorCode::InvalidArgument, "area index is not contiguous");
        names[id] = name;
    }
    return names;
}

nlohmann::json area_index_to_json(const AreaIndex& index) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [name, id] : index) doc[name] = id;
    return doc;
}

AreaIndex area_index_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "area index must be a JSON object");
    AreaIndex index;
    for (const auto& [name, id] : doc.items()) {
        if (!id.is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, "area index values must be node numbers");
        index[name] = id.get<std::size_t>();
    }
    (void)area_names(index);
    return index;
}

void write_area_index(const std::filesystem::path& path, const AreaIndex& index) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << area_index_to_json(index).dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

AreaIndex read_area_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("area index is not valid JSON: ") + e.what());
    }
    return area_index_from_json(doc);
}

History to_history(const std::vector<RawRecord>& records, const ProjectionSpec& proj, const AreaIndex& index) {
    if (records.empty()) throw Error(ErrorCode::EmptyFile, "no records");
    double lat_lo = std::numeric_limits<double>::infinity();
    double lat_hi = -lat_lo;
    double lon_lo = lat_lo;
    double lon_hi = -lat_lo;
    double t0 = lat_lo;
    for (const RawRecord& r : records) {
        lat_lo = std::min(lat_lo, r.lat);
        lat_hi = std::max(lat_hi, r.lat);
        lon_lo = std::min(lon_lo, r.lon);
        lon_hi = std::max(lon_hi, r.lon);
        t0 = std::min(t0, r.timestamp);
    }
    if (proj.origin_lat < lat_lo || proj.origin_lat > lat_hi || proj.origin_lon < lon_lo || proj.origin_lon > lon_hi) {
        throw Error(ErrorCode::InvalidArgument, "projection origin lies outside the data bounding box");
    }
    History h;
    h.events.reserve(records.size());
    for (const RawRecord& r : records) {
        const auto it = index.find(r.area_id);
        if (it == index.end()) throw Error(ErrorCode::UnknownArea, "area '" + r.area_id + "' is not in the index");
        const Point p = proj.forward(r.lat, r.lon);
        h.events.push_back({r.timestamp - t0, p.x, p.y, it->second});
        h.horizon = std::max(h.horizon, r.timestamp - t0);
    }
    h.normalize();
    return h;
}

} // namespace hawknet
