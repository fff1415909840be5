#include "hawknet/model_io.hpp"

#include "hawknet/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace hawknet {

using nlohmann::json;

namespace {

std::vector<double> json_vector(const json& doc, const char* key) {
    if (!doc.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
    return doc.at(key).get<std::vector<double>>();
}

double json_number(const json& doc, const char* key) {
    if (!doc.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
    return doc.at(key).get<double>();
}

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, ptr);
}

json params_to_json(const NetworkParams& params) {
    json doc;
    doc["n"] = params.n;
    doc["omega"] = params.omega;
    doc["sigma"] = params.sigma;
    doc["convention"] = "raw";
    doc["A"] = std::vector<double>(params.A.values().begin(), params.A.values().end());
    json bg;
    if (const auto* g = std::get_if<SingleGaussianBackground>(&params.background)) {
        bg["kind"] = "single_gaussian";
        bg["mu"] = g->mu;
        bg["sigma0"] = g->sigma0;
    } else {
        const auto& kde = std::get<WeightedKdeBackground>(params.background);
        bg["kind"] = "weighted_kde";
        bg["beta"] = std::vector<double>(kde.beta.values().begin(), kde.beta.values().end());
        bg["delta"] = kde.delta;
        bg["window"] = kde.window;
        json anchors = json::array();
        for (const Point& p : kde.anchors) anchors.push_back({p.x, p.y});
        bg["anchors"] = std::move(anchors);
    }
    doc["background"] = std::move(bg);
    return doc;
}

NetworkParams params_from_json(const json& doc) {
    NetworkParams params;
    try {
        params.n = doc.at("n").get<std::size_t>();
        params.omega = json_number(doc, "omega");
        params.sigma = json_number(doc, "sigma");
        const auto a = json_vector(doc, "A");
        params.A = Matrix::from_row_major(params.n, params.n, a);
        const std::string convention = doc.value("convention", "raw");
        if (convention != "raw" && convention != "normalized") {
            throw Error(ErrorCode::InvalidArgument, "convention must be 'raw' or 'normalized'");
        }
        params.A = canonicalize_triggering(params.A, params.omega, convention == "normalized");

        const json& bg = doc.at("background");
        const std::string kind = bg.at("kind").get<std::string>();
        if (kind == "single_gaussian") {
            params.background = SingleGaussianBackground{json_vector(bg, "mu"), json_number(bg, "sigma0")};
        } else if (kind == "weighted_kde") {
            WeightedKdeBackground kde;
            kde.delta = json_number(bg, "delta");
            kde.window = json_number(bg, "window");
            for (const auto& pt : bg.at("anchors")) kde.anchors.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            kde.beta = Matrix::from_row_major(params.n, kde.anchors.size(), json_vector(bg, "beta"));
            params.background = std::move(kde);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown background kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed parameter file: ") + e.what());
    }
    return params;
}

NetworkParams read_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("parameter file is not valid JSON: ") + e.what());
    }
    return params_from_json(doc);
}

void write_params(const std::filesystem::path& path, const NetworkParams& params) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << params_to_json(params).dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void write_events_csv(std::ostream& out, const std::vector<Event>& events) {
    out << "t,x,y,node\n";
    for (const Event& e : events) {
        out << format_double(e.t) << ',' << format_double(e.x) << ',' << format_double(e.y) << ',' << e.node << '\n';
    }
}

void write_events_csv(const std::filesystem::path& path, const std::vector<Event>& events) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    write_events_csv(out, events);
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<Event> read_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::EmptyFile, path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x,y,node") throw Error(ErrorCode::MissingColumn, "event CSV header must be 't,x,y,node'");
    std::vector<Event> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::string_view rest(line);
        std::array<std::string_view, 4> fields;
        for (std::size_t f = 0; f < 4; ++f) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (f == 3)) {
                throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": expected 4 fields");
            }
            fields[f] = rest.substr(0, comma);
            if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
        }
        Event e;
        e.t = parse_double(fields[0]);
        e.x = parse_double(fields[1]);
        e.y = parse_double(fields[2]);
        const double node = parse_double(fields[3]);
        if (node < 0.0 || node != std::floor(node)) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": bad node index");
        }
        e.node = static_cast<std::size_t>(node);
        events.push_back(e);
    }
    return events;
}

History read_history(const std::filesystem::path& path, double horizon) {
    History h;
    h.events = read_events_csv(path);
    double last = 0.0;
    for (const Event& e : h.events) last = std::max(last, e.t);
    h.horizon = horizon >= 0.0 ? horizon : last;
    h.normalize();
    return h;
}

} // namespace hawknet
