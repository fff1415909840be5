// Command-line front end: simulate, fit, plan, sweep, la, report, ingest.

#include "hawknet/error.hpp"
#include "hawknet/estimator.hpp"
#include "hawknet/expectation.hpp"
#include "hawknet/harness.hpp"
#include "hawknet/ingest.hpp"
#include "hawknet/model_io.hpp"
#include "hawknet/planner.hpp"
#include "hawknet/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hawknet;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
}

std::size_t node_count(const History& h) {
    std::size_t n = 0;
    for (const Event& e : h.events) n = std::max(n, e.node + 1);
    return n;
}

// Sweep settings from a JSON document; absent keys keep their defaults.
void apply_sweep_json(const nlohmann::json& doc, SweepConfig& c) {
    auto get = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    try {
        get("n", c.n);
        get("reps", c.reps);
        get("tau", c.tau);
        get("horizon", c.horizon);
        get("p_grid", c.p_grid);
        get("gamma_grid", c.gamma_grid);
        get("q_grid", c.q_grid);
        get("base_cost", c.base_cost);
        get("master_seed", c.master_seed);
        get("fixed_network", c.fixed_network);
        if (doc.contains("sampler")) {
            const auto& s = doc.at("sampler");
            auto sget = [&](const char* key, double& field) {
                if (s.contains(key)) field = s.at(key).get<double>();
            };
            sget("mu_lo", c.sampler.mu_lo);
            sget("mu_hi", c.sampler.mu_hi);
            sget("a_scale", c.sampler.a_scale);
            sget("omega", c.sampler.omega);
            sget("sigma0", c.sampler.sigma0);
            sget("sigma", c.sampler.sigma);
            sget("target_branching", c.sampler.target_branching);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("sweep config: ") + e.what());
    }
}

struct Options {
    std::string params;
    std::string events;
    std::string out{"."};
    std::string input;
    std::string area_index;
    std::string config;
    std::vector<double> p{};
    std::vector<double> gamma{};
    std::vector<double> q{};
    double budget{-1.0};
    std::size_t reps{0};
    std::uint64_t seed{1};
    std::string strategy{"exact-rate"};
    double horizon{-1.0};
    double tau{-1.0};
    double base_cost{1.0};
    std::size_t n{0};
    std::string backend{"branching"};
    std::size_t max_iters{500};
    double tol{1e-8};
    std::vector<double> bandwidths{};
    unsigned threads{0};
    bool fixed_network{false};
    ColumnMap columns{};
    std::vector<std::string> include{};
    std::vector<double> origin{};
};

int cmd_simulate(const Options& o) {
    if (o.horizon <= 0.0) throw Error(ErrorCode::InvalidArgument, "--horizon is required and must be positive");
    const ValidatedParams params = validate(read_params(o.params));
    SimConfig cfg;
    cfg.horizon = o.horizon;
    cfg.seed = o.seed;
    cfg.backend = o.backend == "thinning" ? SimBackend::Thinning : SimBackend::Branching;
    const SimResult res = simulate(params, cfg);
    make_dir(o.out);
    write_events_csv(fs::path(o.out) / "events.csv", res.events);
    std::cout << "simulated " << res.events.size() << " events on [0, " << format_double(o.horizon) << "]\n";
    return 0;
}

int cmd_fit(const Options& o) {
    const History history = read_history(o.events, o.horizon);
    const std::size_t n = o.n > 0 ? o.n : node_count(history);
    EMConfig cfg;
    cfg.max_iters = o.max_iters;
    cfg.tol = o.tol;
    cfg.bandwidth_grid = o.bandwidths;
    const EMFit fit = em_fit(history, n, cfg);
    make_dir(o.out);
    write_params(fs::path(o.out) / "params.json", fit.params);
    std::ostringstream trace;
    trace << "iteration,log_likelihood\n";
    for (std::size_t i = 0; i < fit.log_lik_trace.size(); ++i) {
        trace << i << ',' << format_double(fit.log_lik_trace[i]) << '\n';
    }
    write_text(fs::path(o.out) / "fit_trace.csv", trace.str());
    std::cout << "EM " << (fit.converged ? "converged" : "stopped") << " after " << fit.iterations
              << " iterations; omega=" << format_fixed(fit.params.omega, 6) << " sigma=" << format_fixed(fit.params.sigma, 6)
              << " delta=" << format_fixed(fit.delta, 6) << '\n';
    return 0;
}

int cmd_plan(const Options& o) {
    const ValidatedParams params = validate(read_params(o.params));
    const History history = read_history(o.events, o.tau);
    const double tau = history.horizon;
    if (o.horizon <= tau) throw Error(ErrorCode::InvalidArgument, "--horizon must exceed tau");
    const std::size_t n = params.n();
    const Vector counts = history.counts(n);
    Vector costs(n);
    for (std::size_t i = 0; i < n; ++i) costs[i] = o.base_cost + counts[i];
    double budget = o.budget;
    if (budget < 0.0) {
        if (o.q.size() != 1) throw Error(ErrorCode::InvalidArgument, "give --budget or a single --q");
        budget = sum(costs) * o.q.front() / 100.0;
    }
    const double p = o.p.empty() ? 0.1 : o.p.front();
    const double gamma = o.gamma.empty() ? 1.0 : o.gamma.front();
    InterventionPlan plan{no_intervention(n), p, gamma, tau, o.horizon, costs, budget};
    const StateVector state = state_at(history, tau, params.omega(), n);

    const bool invasion = o.strategy == "exact-invasion";
    const Objective obj = build_objective(invasion ? ObjectiveKind::Invasion : ObjectiveKind::Rate, params, plan, state);
    PlanSolution sol;
    if (o.strategy == "exact-rate" || o.strategy == "exact-invasion") {
        sol = solve_exact(obj, costs, budget);
    } else if (o.strategy == "lp-relax") {
        sol = solve_lp_relax(obj, costs, budget);
    } else if (o.strategy == "mu") {
        sol = score(heuristic_plan(HeuristicKind::MuBased, params, history, costs, budget), obj);
    } else if (o.strategy == "count") {
        sol = score(heuristic_plan(HeuristicKind::CountBased, params, history, costs, budget), obj);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + o.strategy + "'");
    }

    plan.u = sol.u;
    const ExpectationResult with = evaluate(params, plan, state, o.horizon);
    plan.u = no_intervention(n);
    const ExpectationResult base = evaluate(params, plan, state, o.horizon);
    const Reduction red = reduction_metrics(with, base);

    nlohmann::json doc = plan_to_json(sol, obj, budget);
    doc["strategy"] = o.strategy;
    doc["p"] = p;
    doc["gamma"] = gamma;
    doc["tau"] = tau;
    doc["horizon"] = o.horizon;
    doc["rate_reduction_pct"] = red.rate_pct;
    doc["event_reduction_pct"] = red.events_pct;
    make_dir(o.out);
    write_text(fs::path(o.out) / "plan.json", doc.dump(2) + "\n");
    std::cout << o.strategy << ": intervene at " << sol.intervened().size() << " of " << n << " nodes, spent "
              << format_double(sol.spent) << " of " << format_double(budget) << "; rate reduction "
              << format_fixed(red.rate_pct, 2) << "%, event reduction " << format_fixed(red.events_pct, 2) << "%\n";
    return 0;
}

int cmd_sweep(const Options& o) {
    SweepConfig cfg;
    if (!o.config.empty()) apply_sweep_json(read_json(o.config), cfg);
    if (o.n > 0) cfg.n = o.n;
    if (o.reps > 0) cfg.reps = o.reps;
    if (o.tau > 0.0) cfg.tau = o.tau;
    if (o.horizon > 0.0) cfg.horizon = o.horizon;
    if (!o.p.empty()) cfg.p_grid = o.p;
    if (!o.gamma.empty()) cfg.gamma_grid = o.gamma;
    if (!o.q.empty()) cfg.q_grid = o.q;
    cfg.base_cost = o.base_cost;
    cfg.master_seed = o.seed;
    cfg.fixed_network = cfg.fixed_network || o.fixed_network;
    cfg.threads = o.threads;
    const SweepResult result = run_sweep(cfg);
    emit_report(result, o.out);
    std::size_t failed = 0;
    for (const CheckOutcome& c : sweep_checks(result)) failed += c.pass ? 0 : 1;
    std::cout << "sweep: " << result.rows.size() << " rows written to " << o.out << "; " << failed
              << " summary checks failed\n";
    return 0;
}

int cmd_la(const Options& o) {
    History history;
    std::vector<std::string> names;
    if (!o.input.empty()) {
        const LoadResult loaded = load_csv(o.input, o.columns, o.include);
        const AreaIndex index = build_area_index(loaded.records);
        history = to_history(loaded.records, centered_projection(loaded.records), index);
        names = area_names(index);
    } else {
        history = read_history(o.events);
        names = area_names(read_area_index(o.area_index));
    }
    LaConfig cfg;
    if (o.tau > 0.0) cfg.tau = o.tau;
    if (!o.q.empty()) cfg.q_grid = o.q;
    if (!o.p.empty() || !o.gamma.empty()) {
        if (o.p.size() != o.gamma.size()) throw Error(ErrorCode::InvalidArgument, "--p and --gamma must pair up");
        cfg.settings.clear();
        for (std::size_t i = 0; i < o.p.size(); ++i) cfg.settings.push_back({o.p[i], o.gamma[i]});
    }
    cfg.base_cost = o.base_cost;
    cfg.em.max_iters = o.max_iters;
    cfg.em.tol = o.tol;
    cfg.em.bandwidth_grid = o.bandwidths;
    const LaResult result = run_la_pipeline(history, names, cfg);
    emit_la_report(result, o.out);
    bool ok = true;
    for (const LaTable& t : result.tables) ok = ok && optimal_dominates(t);
    std::cout << "la: " << history.events.size() << " events, " << names.size() << " areas, branching ratio "
              << format_fixed(result.branching_ratio, 4) << "; optimal dominates heuristics: " << (ok ? "yes" : "no")
              << '\n';
    return ok ? 0 : 3;
}

int cmd_report(const Options& o) {
    const SweepResult result = read_sweep_csv(o.input);
    emit_report(result, o.out);
    std::cout << "report: " << result.rows.size() << " rows\n";
    return 0;
}

int cmd_ingest(const Options& o) {
    const LoadResult loaded = load_csv(o.input, o.columns, o.include);
    if (loaded.records.empty()) throw Error(ErrorCode::EmptyFile, "no valid rows in " + o.input);
    ProjectionSpec proj = centered_projection(loaded.records);
    if (o.origin.size() == 2) proj = {o.origin[0], o.origin[1]};
    const AreaIndex index = build_area_index(loaded.records);
    const History history = to_history(loaded.records, proj, index);
    make_dir(o.out);
    write_events_csv(fs::path(o.out) / "events.csv", history.events);
    write_area_index(fs::path(o.out) / "area_index.json", index);
    std::ostringstream rej;
    rej << "line,reason\n";
    for (const Reject& r : loaded.rejects) rej << r.line << ",\"" << r.reason << "\"\n";
    write_text(fs::path(o.out) / "rejects.csv", rej.str());
    nlohmann::json proj_doc{{"origin_lat", proj.origin_lat}, {"origin_lon", proj.origin_lon}};
    write_text(fs::path(o.out) / "projection.json", proj_doc.dump(2) + "\n");
    std::cout << "ingest: " << loaded.records.size() << " records, " << loaded.rejects.size() << " rejected, "
              << loaded.filtered << " filtered, " << index.size() << " areas, horizon "
              << format_fixed(history.horizon, 4) << " days\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intervention planning on spatiotemporal Hawkes networks"};
    app.require_subcommand(1);
    Options o;

    auto common_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };

    auto* sim = app.add_subcommand("simulate", "Simulate an event trace");
    sim->add_option("--params", o.params, "Model parameter JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--horizon", o.horizon, "Simulation horizon")->required();
    sim->add_option("--seed", o.seed, "Random seed");
    sim->add_option("--backend", o.backend, "branching or thinning")->check(CLI::IsMember({"branching", "thinning"}));
    common_out(sim);

    auto* fit = app.add_subcommand("fit", "Fit the KDE-background model by EM");
    fit->add_option("--events", o.events, "Event CSV (t,x,y,node)")->required()->check(CLI::ExistingFile);
    fit->add_option("--n", o.n, "Node count (default: largest label + 1)");
    fit->add_option("--horizon", o.horizon, "Observation window end (default: last event)");
    fit->add_option("--max-iters", o.max_iters, "EM iteration cap");
    fit->add_option("--tol", o.tol, "Relative log-likelihood tolerance");
    fit->add_option("--bandwidths", o.bandwidths, "KDE bandwidth candidates for held-out selection");
    common_out(fit);

    auto* plan = app.add_subcommand("plan", "Compute one intervention plan");
    plan->add_option("--params", o.params, "Model parameter JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("--events", o.events, "History CSV on [0, tau]")->required()->check(CLI::ExistingFile);
    plan->add_option("--tau", o.tau, "Intervention time (default: last event)");
    plan->add_option("--horizon", o.horizon, "Planning horizon T")->required();
    plan->add_option("--p", o.p, "Survival probability")->expected(1);
    plan->add_option("--gamma", o.gamma, "Background dampening")->expected(1);
    plan->add_option("--q", o.q, "Budget as percent of total cost")->expected(1);
    plan->add_option("--budget", o.budget, "Absolute budget (overrides --q)");
    plan->add_option("--base-cost", o.base_cost, "Base cost per node");
    plan->add_option("--strategy", o.strategy, "Planning strategy")
        ->check(CLI::IsMember({"exact-rate", "exact-invasion", "lp-relax", "mu", "count"}));
    common_out(plan);

    auto* sweep = app.add_subcommand("sweep", "Run the synthetic (p, gamma, q) experiment");
    sweep->add_option("--config", o.config, "Sweep configuration JSON")->check(CLI::ExistingFile);
    sweep->add_option("--n", o.n, "Nodes per network");
    sweep->add_option("--reps", o.reps, "Replications");
    sweep->add_option("--tau", o.tau, "Intervention time");
    sweep->add_option("--horizon", o.horizon, "Horizon T");
    sweep->add_option("--p", o.p, "p grid");
    sweep->add_option("--gamma", o.gamma, "gamma grid");
    sweep->add_option("--q", o.q, "Budget percentages");
    sweep->add_option("--base-cost", o.base_cost, "Base cost per node");
    sweep->add_option("--seed", o.seed, "Master seed");
    sweep->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sweep->add_flag("--fixed-network", o.fixed_network, "One network for all replications");
    common_out(sweep);

    auto* la = app.add_subcommand("la", "Fit and tabulate the LA crime pipeline");
    la->add_option("--events", o.events, "Canonical event CSV")->check(CLI::ExistingFile);
    la->add_option("--area-index", o.area_index, "area_index.json from ingest")->check(CLI::ExistingFile);
    la->add_option("--input", o.input, "Raw crime CSV (ingested on the fly)")->check(CLI::ExistingFile);
    la->add_option("--tau", o.tau, "Training window in days");
    la->add_option("--p", o.p, "p values, paired with --gamma");
    la->add_option("--gamma", o.gamma, "gamma values, paired with --p");
    la->add_option("--q", o.q, "Budget percentages");
    la->add_option("--base-cost", o.base_cost, "Base cost per node");
    la->add_option("--max-iters", o.max_iters, "EM iteration cap");
    la->add_option("--tol", o.tol, "EM relative tolerance");
    la->add_option("--bandwidths", o.bandwidths, "KDE bandwidth candidates");
    common_out(la);

    auto* report = app.add_subcommand("report", "Rebuild series and summary from sweep.csv");
    report->add_option("--in", o.input, "sweep.csv")->required()->check(CLI::ExistingFile);
    common_out(report);

    auto* ingest = app.add_subcommand("ingest", "Convert a raw crime CSV to events and an area index");
    ingest->add_option("--input", o.input, "Raw CSV")->required()->check(CLI::ExistingFile);
    ingest->add_option("--include", o.include, "Keep only these categories");
    ingest->add_option("--origin", o.origin, "Projection origin: lat lon")->expected(2);
    common_out(ingest);
    for (CLI::App* c : {la, ingest}) {
        c->add_option("--col-time", o.columns.time, "Timestamp column");
        c->add_option("--col-lat", o.columns.lat, "Latitude column");
        c->add_option("--col-lon", o.columns.lon, "Longitude column");
        c->add_option("--col-area", o.columns.area, "Area column");
        c->add_option("--col-category", o.columns.category, "Category column for --include");
    }
    la->add_option("--include", o.include, "Keep only these categories");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(o);
        if (*fit) return cmd_fit(o);
        if (*plan) return cmd_plan(o);
        if (*sweep) return cmd_sweep(o);
        if (*la) {
            if (o.input.empty() && (o.events.empty() || o.area_index.empty())) {
                throw Error(ErrorCode::InvalidArgument, "la needs --input, or --events with --area-index");
            }
            return cmd_la(o);
        }
        if (*report) return cmd_report(o);
        if (*ingest) return cmd_ingest(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
