// Writes the bundled LA-style crime sample: one week of synthetic reports over
// the 21 LAPD areas, drawn from a self-exciting process with spillover to the
// nearest neighbouring area, plus a handful of placeholder and malformed rows.
//
//   make_la_sample OUT.csv

#include "hawknet/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

struct Area {
    const char* name;
    double lat;
    double lon;
    double rate; // background reports per day
};

constexpr std::array<Area, 21> kAreas{{
    {"77th Street", 33.9700, -118.3000, 14.0}, {"Central", 34.0443, -118.2509, 15.0},
    {"Devonshire", 34.2560, -118.5310, 6.5},   {"Foothill", 34.2530, -118.4100, 5.0},
    {"Harbor", 33.7578, -118.2890, 6.5},       {"Hollenbeck", 34.0474, -118.2095, 6.0},
    {"Hollywood", 34.0986, -118.3295, 10.5},   {"Mission", 34.2600, -118.4540, 6.5},
    {"N Hollywood", 34.1720, -118.3860, 8.5},  {"Newton", 34.0120, -118.2560, 9.0},
    {"Northeast", 34.1190, -118.2490, 7.0},    {"Olympic", 34.0500, -118.2910, 9.5},
    {"Pacific", 33.9900, -118.4350, 9.5},      {"Rampart", 34.0686, -118.2760, 8.5},
    {"Southeast", 33.9380, -118.2750, 11.0},   {"Southwest", 34.0232, -118.3050, 10.5},
    {"Topanga", 34.2000, -118.6000, 6.0},      {"Van Nuys", 34.1850, -118.4480, 7.0},
    {"West LA", 34.0440, -118.4340, 7.0},      {"West Valley", 34.1930, -118.5470, 6.5},
    {"Wilshire", 34.0617, -118.3480, 8.5},
}};

constexpr std::array<const char*, 8> kCrimes{
    "VEHICLE - STOLEN", "BATTERY - SIMPLE ASSAULT", "BURGLARY FROM VEHICLE", "THEFT PLAIN - PETTY ($950 & UNDER)",
    "BURGLARY", "VANDALISM - FELONY ($400 & OVER, ALL CHURCH VANDALISMS)", "ASSAULT WITH DEADLY WEAPON, AGGRAVATED ASSAULT",
    "THEFT OF IDENTITY"};

constexpr double kDays = 7.0;
constexpr double kRateScale = 0.8;
constexpr std::size_t kTarget = 1579;
constexpr double kSelf = 0.30;      // expected same-area offspring per report
constexpr double kSpill = 0.08;     // expected offspring in the nearest area
constexpr double kDecay = 1.5;      // per day
constexpr double kBgKm = 1.6;       // background spread around the area centre
constexpr double kTrigKm = 0.25;    // offspring displacement
constexpr double kKmPerLat = 110.574;
constexpr double kKmPerLonEq = 111.320;

struct Report {
    double t;
    double lat;
    double lon;
    std::size_t area;
};

class Draw {
public:
    explicit Draw(std::uint64_t stream) : rng_(0x1a5e2024, stream) {}
    double uniform() { return rng_.uniform(); }
    double uniform_pos() { return rng_.uniform_pos(); }
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(rng_.uniform_pos()));
        return r * std::cos(2.0 * std::numbers::pi * rng_.uniform());
    }
    std::size_t poisson(double mean) {
        std::size_t k = 0;
        double acc = -std::log(rng_.uniform_pos());
        while (acc < mean) {
            ++k;
            acc += -std::log(rng_.uniform_pos());
        }
        return k;
    }

private:
    hawknet::Philox rng_;
};

std::size_t nearest(std::size_t a) {
    std::size_t best = a;
    double best_d = 1e300;
    for (std::size_t b = 0; b < kAreas.size(); ++b) {
        if (b == a) continue;
        const double d = std::hypot(kAreas[a].lat - kAreas[b].lat, kAreas[a].lon - kAreas[b].lon);
        if (d < best_d) {
            best_d = d;
            best = b;
        }
    }
    return best;
}

std::vector<Report> generate(std::uint64_t stream) {
    Draw draw(stream);
    const double km_per_lon = kKmPerLonEq * std::cos(34.05 * std::numbers::pi / 180.0);
    std::vector<Report> all;
    for (std::size_t a = 0; a < kAreas.size(); ++a) {
        const std::size_t count = draw.poisson(kAreas[a].rate * kRateScale * kDays);
        for (std::size_t k = 0; k < count; ++k) {
            all.push_back({kDays * draw.uniform(), kAreas[a].lat + kBgKm * draw.gaussian() / kKmPerLat,
                           kAreas[a].lon + kBgKm * draw.gaussian() / km_per_lon, a});
        }
    }
    for (std::size_t head = 0; head < all.size(); ++head) {
        const Report parent = all[head];
        const std::array<std::pair<std::size_t, double>, 2> targets{{{parent.area, kSelf}, {nearest(parent.area), kSpill}}};
        for (const auto& [area, mean] : targets) {
            const std::size_t kids = draw.poisson(mean);
            for (std::size_t k = 0; k < kids; ++k) {
                const double t = parent.t - std::log(draw.uniform_pos()) / kDecay;
                if (t >= kDays) continue;
                all.push_back({t, parent.lat + kTrigKm * draw.gaussian() / kKmPerLat,
                               parent.lon + kTrigKm * draw.gaussian() / km_per_lon, area});
            }
        }
    }
    return all;
}

std::string stamp(double t) {
    // 2024-09-01 is day 0; minute resolution like the public records.
    const long minutes = static_cast<long>(std::floor(t * 1440.0));
    const int day = 1 + static_cast<int>(minutes / 1440);
    const int hh = static_cast<int>((minutes % 1440) / 60);
    const int mm = static_cast<int>(minutes % 60);
    const int h12 = hh % 12 == 0 ? 12 : hh % 12;
    char buf[40];
    std::snprintf(buf, sizeof buf, "09/%02d/2024 %02d:%02d:00 %s", day, h12, mm, hh < 12 ? "AM" : "PM");
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_la_sample OUT.csv\n";
        return 1;
    }
    std::vector<Report> reports;
    std::uint64_t stream = 0;
    for (;; ++stream) {
        reports = generate(stream);
        if (reports.size() >= kTarget) break;
    }
    // Thin uniformly down to the target size.
    Draw thin(1000 + stream);
    while (reports.size() > kTarget) {
        const auto k = static_cast<std::size_t>(thin.uniform() * static_cast<double>(reports.size()));
        reports.erase(reports.begin() + static_cast<std::ptrdiff_t>(k));
    }
    // Public extracts are not time ordered.
    for (std::size_t i = reports.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(thin.uniform() * static_cast<double>(i));
        std::swap(reports[i - 1], reports[j]);
    }

    std::ofstream out(argv[1], std::ios::binary);
    out << "DR_NO,DATE_TIME_OCC,AREA,AREA_NAME,CRM_CD_DESC,LAT,LON\n";
    long dr = 241200001;
    char coord[64];
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const Report& r = reports[i];
        std::snprintf(coord, sizeof coord, "%.4f,%.4f", r.lat, r.lon);
        out << dr++ << ',' << stamp(r.t) << ',' << (r.area + 1) << ',' << kAreas[r.area].name << ",\""
            << kCrimes[static_cast<std::size_t>(thin.uniform() * kCrimes.size())] << "\"," << coord << '\n';
        if (i % 400 == 17) {
            // Placeholder location, as in the public data.
            out << dr++ << ',' << stamp(r.t) << ',' << (r.area + 1) << ',' << kAreas[r.area].name
                << ",\"THEFT OF IDENTITY\",0.0000,0.0000\n";
        }
    }
    out << dr++ << ",09/31/2024 10:00:00 AM,1,77th Street,\"BURGLARY\",33.9712,-118.3011\n";
    out << dr++ << ",09/03/2024 10:00:00 AM,2,Central,\"BURGLARY\"\n";
    if (!out) {
        std::cerr << "write failed\n";
        return 1;
    }
    std::cout << "wrote " << reports.size() << " valid rows to " << argv[1] << '\n';
    return 0;
}
