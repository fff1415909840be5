#include "hawknet/harness.hpp"

#include "hawknet/error.hpp"
#include "hawknet/ingest.hpp"
#include "hawknet/model_io.hpp"
#include "hawknet/planner.hpp"
#include "hawknet/propagators.hpp"
#include "hawknet/rng.hpp"
#include "hawknet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace hawknet {

namespace {

constexpr std::uint64_t kNetworkTag = 0x6e6574;
constexpr std::uint64_t kHistoryTag = 0x68697374;

std::size_t index_of(Strategy s) { return static_cast<std::size_t>(s); }

// Runs body(i) for i in [0, count) on a small pool and rethrows the failure
// with the lowest index.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Vector budget_costs(const Vector& counts, double base) {
    Vector c(counts.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = base + counts[i];
    return c;
}

std::array<PlanSolution, 4> plan_all(const Objective& rate, const Objective& invasion, const Vector& mass,
                                     const Vector& counts, const Vector& costs, double budget) {
    return {solve_exact(rate, costs, budget), solve_exact(invasion, costs, budget),
            heuristic_plan(mass, costs, budget, PlanMethod::HeuristicMu),
            heuristic_plan(counts, costs, budget, PlanMethod::HeuristicCount)};
}

Reduction reductions_of(const Objective& rate, const Objective& invasion, std::span<const std::uint8_t> u) {
    return reduction_metrics(Totals{rate.value(u), invasion.value(u)},
                             Totals{rate.baseline(), invasion.baseline()});
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

std::string pg_suffix(double p, double gamma) { return "p" + format_double(p) + "_g" + format_double(gamma); }

double pooled(double a, double b) { return std::sqrt(a * a + b * b); }

struct CellKey {
    double p;
    double gamma;
    double q;
    Strategy s;
    auto operator<=>(const CellKey&) const = default;
};

} // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::ExactRate:
        return "exact-rate";
    case Strategy::ExactInvasion:
        return "exact-invasion";
    case Strategy::Mu:
        return "mu";
    case Strategy::Count:
        return "count";
    }
    return "?";
}

Strategy strategy_from_string(std::string_view name) {
    for (Strategy s : kStrategies)
        if (to_string(s) == name) return s;
    throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

ValidatedParams sample_network(std::size_t n, const SamplerSpec& spec, std::uint64_t seed, std::uint64_t stream) {
    Philox rng(seed, stream);
    SingleGaussianBackground bg;
    bg.sigma0 = spec.sigma0;
    bg.mu.resize(n);
    for (double& m : bg.mu) m = spec.mu_lo + (spec.mu_hi - spec.mu_lo) * rng.uniform();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = spec.a_scale * rng.uniform();
    const double radius = spectral_radius_dense(a);
    if (radius >= spec.omega) a *= spec.target_branching * spec.omega / radius;
    return validate(NetworkParams{n, std::move(bg), std::move(a), spec.omega, spec.sigma});
}

void check(const SweepConfig& c) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidArgument, why); };
    if (c.n == 0) fail("n must be positive");
    if (c.reps == 0) fail("reps must be at least 1");
    if (!(c.tau > 0.0) || !(c.horizon > c.tau)) fail("need 0 < tau < horizon");
    if (c.p_grid.empty() || c.gamma_grid.empty() || c.q_grid.empty()) fail("grids must be nonempty");
    for (double q : c.q_grid)
        if (!(q > 0.0 && q <= 100.0)) fail("q values must lie in (0, 100]");
    for (double p : c.p_grid)
        if (!(p >= 0.0 && p <= 1.0)) fail("p values must lie in [0, 1]");
    for (double g : c.gamma_grid)
        if (!(g >= 0.0 && g <= 1.0)) fail("gamma values must lie in [0, 1]");
    if (!(c.base_cost >= 0.0)) fail("base cost must be nonnegative");
    const SamplerSpec& s = c.sampler;
    if (!(s.mu_lo > 0.0 && s.mu_hi >= s.mu_lo)) fail("mu range must be positive and ordered");
    if (!(s.a_scale >= 0.0) || !(s.omega > 0.0) || !(s.sigma0 > 0.0) || !(s.sigma > 0.0)) fail("bad sampler scales");
    if (!(s.target_branching > 0.0 && s.target_branching < 1.0)) fail("target branching ratio must lie in (0, 1)");
}

SweepResult run_sweep(const SweepConfig& config) {
    check(config);
    const std::size_t n_pg = config.p_grid.size() * config.gamma_grid.size();
    const std::size_t n_q = config.q_grid.size();
    const std::size_t cells = n_pg * n_q * kStrategies.size();
    // per_rep[r][cell] with cell = ((pg * n_q) + q) * 4 + strategy
    std::vector<std::vector<Reduction>> per_rep(config.reps);

    const std::uint64_t net_seed = derive_seed(config.master_seed, kNetworkTag);
    const std::uint64_t hist_seed = derive_seed(config.master_seed, kHistoryTag);
    parallel_for(config.reps, config.threads, [&](std::size_t r) {
        const ValidatedParams params =
            sample_network(config.n, config.sampler, net_seed, config.fixed_network ? 0 : r);
        SimConfig sim{config.tau, std::nullopt, hist_seed, r, SimBackend::Branching};
        History history{simulate(params, sim).events, config.tau};
        history.normalize();
        const StateVector state = state_at(history, config.tau, params.omega(), params.n());
        const Vector counts = history.counts(params.n());
        const Vector costs = budget_costs(counts, config.base_cost);
        const double total_cost = sum(costs);
        const PropagatorSet shifted = propagators_at(params, config.horizon - config.tau);

        std::vector<Reduction>& out = per_rep[r];
        out.resize(cells);
        std::size_t pg = 0;
        for (double p : config.p_grid) {
            for (double gamma : config.gamma_grid) {
                InterventionPlan plan{no_intervention(params.n()), p, gamma, config.tau, config.horizon, {}, 0.0};
                const Objective rate = build_objective(ObjectiveKind::Rate, params, plan, state, shifted);
                const Objective invasion = build_objective(ObjectiveKind::Invasion, params, plan, state, shifted);
                for (std::size_t qi = 0; qi < n_q; ++qi) {
                    const double budget = total_cost * config.q_grid[qi] / 100.0;
                    const auto plans = plan_all(rate, invasion, params.mu(), counts, costs, budget);
                    for (std::size_t s = 0; s < kStrategies.size(); ++s) {
                        out[(pg * n_q + qi) * kStrategies.size() + s] = reductions_of(rate, invasion, plans[s].u);
                    }
                }
                ++pg;
            }
        }
    });

    SweepResult result;
    result.reps = config.reps;
    const double reps = static_cast<double>(config.reps);
    std::size_t pg = 0;
    for (double p : config.p_grid) {
        for (double gamma : config.gamma_grid) {
            for (std::size_t qi = 0; qi < n_q; ++qi) {
                for (std::size_t s = 0; s < kStrategies.size(); ++s) {
                    const std::size_t cell = (pg * n_q + qi) * kStrategies.size() + s;
                    double mr = 0.0, m2r = 0.0, me = 0.0, m2e = 0.0;
                    for (std::size_t r = 0; r < config.reps; ++r) {
                        const double k = static_cast<double>(r + 1);
                        const Reduction& x = per_rep[r][cell];
                        const double dr = x.rate_pct - mr;
                        mr += dr / k;
                        m2r += dr * (x.rate_pct - mr);
                        const double de = x.events_pct - me;
                        me += de / k;
                        m2e += de * (x.events_pct - me);
                    }
                    SweepRow row{kStrategies[s], p, gamma, config.q_grid[qi], mr, me, 0.0, 0.0};
                    if (config.reps > 1) {
                        row.stderr_rate = std::sqrt(m2r / ((reps - 1.0) * reps));
                        row.stderr_events = std::sqrt(m2e / ((reps - 1.0) * reps));
                    }
                    result.rows.push_back(row);
                }
            }
            ++pg;
        }
    }
    return result;
}

std::vector<CheckOutcome> sweep_checks(const SweepResult& result) {
    std::map<CellKey, const SweepRow*> cells;
    std::vector<double> ps, gammas, qs;
    for (const SweepRow& r : result.rows) {
        cells[{r.p, r.gamma, r.q, r.strategy}] = &r;
        ps.push_back(r.p);
        gammas.push_back(r.gamma);
        qs.push_back(r.q);
    }
    for (auto* v : {&ps, &gammas, &qs}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    auto at = [&](double p, double g, double q, Strategy s) -> const SweepRow* {
        const auto it = cells.find({p, g, q, s});
        return it == cells.end() ? nullptr : it->second;
    };
    struct Metric {
        const char* name;
        Strategy exact;
        double SweepRow::*mean;
        double SweepRow::*se;
    };
    const std::array<Metric, 2> metrics{
        Metric{"rate", Strategy::ExactRate, &SweepRow::mean_rate_reduction_pct, &SweepRow::stderr_rate},
        Metric{"events", Strategy::ExactInvasion, &SweepRow::mean_event_reduction_pct, &SweepRow::stderr_events}};

    std::vector<CheckOutcome> out;
    auto record = [&](std::string name, std::size_t failures, std::size_t total, std::string first) {
        CheckOutcome c{std::move(name), failures == 0, std::to_string(total - failures) + "/" + std::to_string(total) +
                                                           " comparisons hold"};
        if (failures > 0) c.detail += "; first violation: " + first;
        out.push_back(std::move(c));
    };
    auto where = [](double p, double g, double q) {
        return "p=" + format_double(p) + " gamma=" + format_double(g) + " q=" + format_double(q);
    };
    // Passes when a >= b within 3 pooled standard errors.
    auto ge = [&](const SweepRow* a, const SweepRow* b, const Metric& m) {
        return a->*m.mean >= b->*m.mean - 3.0 * pooled(a->*m.se, b->*m.se);
    };

    for (const Metric& m : metrics) {
        std::size_t total = 0, failures = 0;
        std::string first;
        for (double p : ps)
            for (double g : gammas)
                for (double q : qs) {
                    const SweepRow* ex = at(p, g, q, m.exact);
                    for (Strategy h : {Strategy::Mu, Strategy::Count}) {
                        const SweepRow* he = at(p, g, q, h);
                        if (!ex || !he) continue;
                        ++total;
                        if (!ge(ex, he, m) && failures++ == 0) first = where(p, g, q) + " vs " + std::string(to_string(h));
                    }
                }
        record(std::string("dominance-") + m.name, failures, total, first);
    }

    for (const Metric& m : metrics) {
        std::size_t total = 0, failures = 0;
        std::string first;
        for (double p : ps)
            for (double g : gammas)
                for (Strategy s : kStrategies)
                    for (std::size_t k = 1; k < qs.size(); ++k) {
                        const SweepRow* lo = at(p, g, qs[k - 1], s);
                        const SweepRow* hi = at(p, g, qs[k], s);
                        if (!lo || !hi) continue;
                        ++total;
                        if (!ge(hi, lo, m) && failures++ == 0) first = where(p, g, qs[k]) + " " + std::string(to_string(s));
                    }
        record(std::string("monotone-q-") + m.name, failures, total, first);
    }

    for (const Metric& m : metrics) {
        std::size_t total = 0, failures = 0;
        std::string first;
        for (double q : qs)
            for (Strategy s : kStrategies) {
                for (double p : ps)
                    for (std::size_t k = 1; k < gammas.size(); ++k) {
                        const SweepRow* low = at(p, gammas[k - 1], q, s);
                        const SweepRow* high = at(p, gammas[k], q, s);
                        if (!low || !high) continue;
                        ++total;
                        if (!ge(low, high, m) && failures++ == 0) first = where(p, gammas[k - 1], q) + " " + std::string(to_string(s));
                    }
                for (double g : gammas)
                    for (std::size_t k = 1; k < ps.size(); ++k) {
                        const SweepRow* low = at(ps[k - 1], g, q, s);
                        const SweepRow* high = at(ps[k], g, q, s);
                        if (!low || !high) continue;
                        ++total;
                        if (!ge(low, high, m) && failures++ == 0) first = where(ps[k - 1], g, q) + " " + std::string(to_string(s));
                    }
            }
        record(std::string("lower-p-gamma-higher-") + m.name, failures, total, first);
    }

    for (const Metric& m : metrics) {
        std::size_t total = 0, failures = 0;
        std::string first;
        std::string peaks;
        for (double p : ps)
            for (double g : gammas) {
                double best_gap = 0.0;
                double best_q = 0.0;
                for (double q : qs) {
                    const SweepRow* ex = at(p, g, q, m.exact);
                    const SweepRow* mu = at(p, g, q, Strategy::Mu);
                    const SweepRow* ct = at(p, g, q, Strategy::Count);
                    if (!ex || !mu || !ct) continue;
                    const double gap = ex->*m.mean - std::max(mu->*m.mean, ct->*m.mean);
                    if (gap > best_gap) {
                        best_gap = gap;
                        best_q = q;
                    }
                }
                if (best_gap <= 1e-9) continue;
                ++total;
                peaks += (peaks.empty() ? "" : ", ") + format_double(best_q);
                if ((best_q < 30.0 || best_q > 70.0) && failures++ == 0) first = where(p, g, best_q);
            }
        record(std::string("gap-peak-mid-budget-") + m.name, failures, total, first);
        out.back().detail += "; peak q per (p, gamma): " + (peaks.empty() ? std::string("none") : peaks);
    }
    return out;
}

void emit_report(const SweepResult& result, const std::filesystem::path& out_dir) {
    if (result.rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty sweep result");
    ensure_dir(out_dir);
    std::ostringstream csv;
    csv << "strategy,p,gamma,q,mean_rate_reduction_pct,mean_event_reduction_pct,stderr_rate,stderr_events,reps\n";
    for (const SweepRow& r : result.rows) {
        csv << to_string(r.strategy) << ',' << format_double(r.p) << ',' << format_double(r.gamma) << ','
            << format_double(r.q) << ',' << format_double(r.mean_rate_reduction_pct) << ','
            << format_double(r.mean_event_reduction_pct) << ',' << format_double(r.stderr_rate) << ','
            << format_double(r.stderr_events) << ',' << result.reps << '\n';
    }
    write_file(out_dir / "sweep.csv", csv.str());

    // One series file per (p, gamma), rows ordered by q then metric.
    std::map<std::pair<double, double>, std::map<double, std::array<const SweepRow*, 4>>> series;
    for (const SweepRow& r : result.rows) series[{r.p, r.gamma}][r.q][index_of(r.strategy)] = &r;
    for (const auto& [pg, by_q] : series) {
        std::ostringstream s;
        s << "q,metric";
        for (Strategy st : kStrategies) s << ',' << to_string(st);
        s << '\n';
        for (const auto& [q, row] : by_q) {
            for (int metric = 0; metric < 2; ++metric) {
                s << format_double(q) << ',' << (metric == 0 ? "rate" : "events");
                for (const SweepRow* cell : row) {
                    s << ',';
                    if (cell) s << format_fixed(metric == 0 ? cell->mean_rate_reduction_pct : cell->mean_event_reduction_pct, 4);
                }
                s << '\n';
            }
        }
        write_file(out_dir / ("series_" + pg_suffix(pg.first, pg.second) + ".csv"), s.str());
    }

    std::ostringstream md;
    md << "# Sweep summary\n\n";
    md << "Replications per cell: " << result.reps << ". Rows: " << result.rows.size() << ".\n\n";
    md << "| check | result | detail |\n|---|---|---|\n";
    for (const CheckOutcome& c : sweep_checks(result)) {
        md << "| " << c.name << " | " << (c.pass ? "PASS" : "FAIL") << " | " << c.detail << " |\n";
    }
    md << "\nMean reductions (%), rate / events:\n\n";
    md << "| p | gamma | q |";
    for (Strategy st : kStrategies) md << ' ' << to_string(st) << " |";
    md << "\n|---|---|---|---|---|---|---|\n";
    for (const auto& [pg, by_q] : series) {
        for (const auto& [q, row] : by_q) {
            md << "| " << format_double(pg.first) << " | " << format_double(pg.second) << " | " << format_double(q) << " |";
            for (const SweepRow* cell : row) {
                if (cell) {
                    md << ' ' << format_fixed(cell->mean_rate_reduction_pct, 2) << " / "
                       << format_fixed(cell->mean_event_reduction_pct, 2);
                }
                md << " |";
            }
            md << '\n';
        }
    }
    write_file(out_dir / "summary.md", md.str());
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::vector<CsvRow> rows = parse_csv(buf.str());
    if (rows.size() < 2) throw Error(ErrorCode::EmptyFile, path.string() + " has no sweep rows");
    const std::vector<std::string> expected{"strategy", "p", "gamma", "q", "mean_rate_reduction_pct",
                                            "mean_event_reduction_pct", "stderr_rate", "stderr_events", "reps"};
    if (rows.front().fields != expected) throw Error(ErrorCode::MissingColumn, path.string() + " is not a sweep CSV");
    SweepResult result;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != expected.size()) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(rows[i].line) + ": wrong field count");
        }
        auto num = [&](std::size_t k) {
            try {
                std::size_t used = 0;
                const double v = std::stod(f[k], &used);
                if (used != f[k].size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(rows[i].line) + ": bad number '" + f[k] + "'");
            }
        };
        result.rows.push_back({strategy_from_string(f[0]), num(1), num(2), num(3), num(4), num(5), num(6), num(7)});
        result.reps = static_cast<std::size_t>(num(8));
    }
    return result;
}

LaResult run_la_pipeline(const History& history, const std::vector<std::string>& area_names, const LaConfig& config) {
    const std::size_t n = area_names.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "no areas");
    if (!(config.tau > 0.0) || !(config.horizon_factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "need tau > 0 and horizon factor > 1");
    for (const Event& e : history.events) {
        if (e.t > config.tau) throw Error(ErrorCode::EventAfterTau, "event at t=" + format_double(e.t) + " after tau");
    }
    History h = history;
    h.horizon = config.tau;
    h.normalize();

    LaResult out;
    out.tau = config.tau;
    out.horizon = config.tau * config.horizon_factor;
    out.area_names = area_names;
    out.fit = em_fit(h, n, config.em);
    const ValidatedParams params = validate(out.fit.params);
    out.branching_ratio = params.branching_ratio();

    const StateVector state = state_at(h, config.tau, params.omega(), n);
    const Vector counts = h.counts(n);
    const Vector costs = budget_costs(counts, config.base_cost);
    const double total_cost = sum(costs);
    const PropagatorSet shifted = propagators_at(params, out.horizon - out.tau);
    for (const auto& [p, gamma] : config.settings) {
        InterventionPlan plan{no_intervention(n), p, gamma, out.tau, out.horizon, {}, 0.0};
        const Objective rate = build_objective(ObjectiveKind::Rate, params, plan, state, shifted);
        const Objective invasion = build_objective(ObjectiveKind::Invasion, params, plan, state, shifted);
        LaTable table{p, gamma, {}};
        for (double q : config.q_grid) {
            if (!(q > 0.0 && q <= 100.0)) throw Error(ErrorCode::InvalidArgument, "q values must lie in (0, 100]");
            LaRow row;
            row.q = q;
            row.budget = total_cost * q / 100.0;
            const auto plans = plan_all(rate, invasion, params.mu(), counts, costs, row.budget);
            for (std::size_t s = 0; s < kStrategies.size(); ++s) {
                row.reduction[s] = reductions_of(rate, invasion, plans[s].u);
                row.intervened[s] = plans[s].intervened();
            }
            table.rows.push_back(std::move(row));
        }
        out.tables.push_back(std::move(table));
    }
    return out;
}

bool optimal_dominates(const LaTable& table, double slack) {
    for (const LaRow& r : table.rows) {
        for (Strategy h : {Strategy::Mu, Strategy::Count}) {
            if (r.reduction[index_of(Strategy::ExactRate)].rate_pct < r.reduction[index_of(h)].rate_pct - slack) return false;
            if (r.reduction[index_of(Strategy::ExactInvasion)].events_pct < r.reduction[index_of(h)].events_pct - slack) {
                return false;
            }
        }
    }
    return true;
}

void emit_la_report(const LaResult& result, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    write_params(out_dir / "la_params.json", result.fit.params);

    std::ostringstream md;
    md << "# LA intervention tables\n\n";
    md << "Fitted omega " << format_fixed(result.fit.params.omega, 6) << ", sigma " << format_fixed(result.fit.params.sigma, 6)
       << ", delta " << format_fixed(result.fit.delta, 6) << ", branching ratio " << format_fixed(result.branching_ratio, 6)
       << ", EM iterations " << result.fit.iterations << (result.fit.converged ? " (converged)" : " (iteration cap)")
       << ".\ntau = " << format_double(result.tau) << ", T = " << format_fixed(result.horizon, 4) << ".\n";

    std::ostringstream sets;
    sets << "p,gamma,q,strategy,areas\n";
    for (const LaTable& t : result.tables) {
        for (int metric = 0; metric < 2; ++metric) {
            const Strategy opt = metric == 0 ? Strategy::ExactRate : Strategy::ExactInvasion;
            auto value = [&](const LaRow& r, Strategy s) {
                return metric == 0 ? r.reduction[index_of(s)].rate_pct : r.reduction[index_of(s)].events_pct;
            };
            md << "\n## " << (metric == 0 ? "Total expected rate reduction" : "Total expected event reduction")
               << " (%), (p, gamma) = (" << format_double(t.p) << ", " << format_double(t.gamma) << ")\n\n";
            md << "| Budget q (%) | Optimal strategy | mu-based heuristic | N_i(tau)-based heuristic |\n";
            md << "|---|---|---|---|\n";
            std::ostringstream csv;
            csv << "q,optimal,mu,count\n";
            for (const LaRow& r : t.rows) {
                md << "| " << format_fixed(r.q, 1) << " | " << format_fixed(value(r, opt), 2) << " | "
                   << format_fixed(value(r, Strategy::Mu), 2) << " | " << format_fixed(value(r, Strategy::Count), 2) << " |\n";
                csv << format_double(r.q) << ',' << format_fixed(value(r, opt), 6) << ','
                    << format_fixed(value(r, Strategy::Mu), 6) << ',' << format_fixed(value(r, Strategy::Count), 6) << '\n';
            }
            write_file(out_dir / ("la_" + std::string(metric == 0 ? "rate" : "events") + "_" + pg_suffix(t.p, t.gamma) + ".csv"),
                       csv.str());
        }
        md << "\nIntervened areas, (p, gamma) = (" << format_double(t.p) << ", " << format_double(t.gamma) << "):\n\n";
        for (const LaRow& r : t.rows) {
            for (Strategy s : kStrategies) {
                std::string names;
                for (std::size_t i : r.intervened[index_of(s)]) {
                    if (!names.empty()) names += "; ";
                    names += result.area_names.at(i);
                }
                sets << format_double(t.p) << ',' << format_double(t.gamma) << ',' << format_double(r.q) << ','
                     << to_string(s) << ",\"" << names << "\"\n";
                md << "- q=" << format_double(r.q) << " " << to_string(s) << ": " << (names.empty() ? "none" : names) << '\n';
            }
        }
        md << "\nOptimal column at least each heuristic in every row: " << (optimal_dominates(t) ? "yes" : "NO") << "\n";
    }
    write_file(out_dir / "la_tables.md", md.str());
    write_file(out_dir / "la_sets.csv", sets.str());
}

} // namespace hawknet
