#include "hawknet/simulator.hpp"

#include "hawknet/error.hpp"
#include "hawknet/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>
#include <tuple>

namespace hawknet {

namespace {

constexpr double kTwoPi = 6.283185307179586;

class Sampler {
public:
    Sampler(const ValidatedParams& params, std::uint64_t seed, std::uint64_t stream)
        : params_(params), rng_(seed, stream) {
        if (const auto* kde = std::get_if<WeightedKdeBackground>(&params.params().background)) {
            kde_ = kde;
            cumulative_.resize(params.n());
            for (std::size_t u = 0; u < params.n(); ++u) {
                auto& cum = cumulative_[u];
                cum.resize(kde->anchors.size());
                double acc = 0.0;
                for (std::size_t k = 0; k < kde->anchors.size(); ++k) {
                    acc += kde->beta(u, k);
                    cum[k] = acc;
                }
            }
        }
    }

    double uniform() { return rng_.uniform(); }

    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        std::poisson_distribution<std::uint64_t> dist(mean);
        return dist(rng_);
    }

    // Lag in [lo, hi] with density proportional to exp(-omega s).
    double truncated_lag(double lo, double hi) {
        const double omega = params_.omega();
        const double span = -std::expm1(-omega * (hi - lo));
        return lo - std::log1p(-uniform() * span) / omega;
    }

    double exponential(double rate) { return -std::log(rng_.uniform_pos()) / rate; }

    Point gaussian(Point centre, double scale) {
        // Box-Muller; both coordinates from one pair.
        const double r = scale * std::sqrt(-2.0 * std::log(rng_.uniform_pos()));
        const double theta = kTwoPi * uniform();
        return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
    }

    Point background_location(std::size_t node) {
        if (kde_ == nullptr) {
            return gaussian({0.0, 0.0}, std::get<SingleGaussianBackground>(params_.params().background).sigma0);
        }
        const auto& cum = cumulative_[node];
        const double target = uniform() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
        return gaussian(kde_->anchors[k], kde_->delta);
    }

    // Index drawn with probability weights[i] / total.
    std::size_t categorical(const Vector& weights, double total) {
        const double target = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (target < acc) return i;
        }
        for (std::size_t i = weights.size(); i-- > 0;)
            if (weights[i] > 0.0) return i;
        return 0;
    }

private:
    const ValidatedParams& params_;
    Philox rng_;
    const WeightedKdeBackground* kde_{nullptr};
    std::vector<Vector> cumulative_;
};

struct Window {
    double start{0.0};
    double end{0.0};
    Vector background_rate;     // per node on (start, end]
    std::vector<Event> parents; // pre-start events that still excite
};

void sort_events(std::vector<Event>& events) {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.t, a.node, a.x, a.y) < std::tie(b.t, b.node, b.x, b.y);
    });
}

void spawn_children(const ValidatedParams& params, Sampler& rng, const Event& parent, double lag_lo, double lag_hi,
                    std::vector<Event>& out) {
    const Matrix& a = params.A();
    const double omega = params.omega();
    const double mass = std::exp(-omega * lag_lo) - std::exp(-omega * lag_hi);
    for (std::size_t i = 0; i < params.n(); ++i) {
        const double rate = a(i, parent.node);
        if (rate <= 0.0) continue;
        const std::uint64_t k = rng.poisson(rate / omega * mass);
        for (std::uint64_t c = 0; c < k; ++c) {
            const double t = parent.t + rng.truncated_lag(lag_lo, lag_hi);
            const Point z = rng.gaussian({parent.x, parent.y}, params.sigma());
            out.push_back({t, z.x, z.y, i});
        }
    }
}

std::vector<Event> run_branching(const ValidatedParams& params, const Window& w, Sampler& rng) {
    std::vector<Event> events;
    for (const Event& parent : w.parents) {
        spawn_children(params, rng, parent, std::max(0.0, w.start - parent.t), w.end - parent.t, events);
    }
    for (std::size_t i = 0; i < params.n(); ++i) {
        const std::uint64_t k = rng.poisson(w.background_rate[i] * (w.end - w.start));
        for (std::uint64_t c = 0; c < k; ++c) {
            const double t = w.start + (w.end - w.start) * rng.uniform();
            const Point z = rng.background_location(i);
            events.push_back({t, z.x, z.y, i});
        }
    }
    // Breadth-first cascade; events appended while iterating.
    for (std::size_t head = 0; head < events.size(); ++head) {
        const Event parent = events[head];
        spawn_children(params, rng, parent, 0.0, w.end - parent.t, events);
    }
    sort_events(events);
    return events;
}

std::vector<Event> run_thinning(const ValidatedParams& params, const Window& w, Sampler& rng) {
    const std::size_t n = params.n();
    const double omega = params.omega();
    const Matrix& a = params.A();
    std::vector<Event> sources = w.parents;
    Vector excitation(n, 0.0);
    for (const Event& e : sources) excitation[e.node] += std::exp(-omega * (w.start - e.t));

    std::vector<Event> events;
    Vector lambda(n);
    auto intensities = [&]() {
        const Vector triggered = a * excitation;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lambda[i] = w.background_rate[i] + triggered[i];
            total += lambda[i];
        }
        return total;
    };

    double t = w.start;
    double bound = intensities();
    while (bound > 0.0) {
        const double candidate = t + rng.exponential(bound);
        if (candidate > w.end) break;
        const double decay = std::exp(-omega * (candidate - t));
        for (double& e : excitation) e *= decay;
        t = candidate;
        const double total = intensities();
        if (rng.uniform() * bound <= total) {
            const std::size_t node = rng.categorical(lambda, total);
            Point z;
            if (rng.uniform() * lambda[node] < w.background_rate[node]) {
                z = rng.background_location(node);
            } else {
                Vector weight(sources.size());
                double sum_w = 0.0;
                for (std::size_t k = 0; k < sources.size(); ++k) {
                    weight[k] = a(node, sources[k].node) * std::exp(-omega * (t - sources[k].t));
                    sum_w += weight[k];
                }
                const Event& parent = sources[rng.categorical(weight, sum_w)];
                z = rng.gaussian({parent.x, parent.y}, params.sigma());
            }
            const Event e{t, z.x, z.y, node};
            events.push_back(e);
            sources.push_back(e);
            excitation[node] += 1.0;
            bound = intensities();
        } else {
            bound = total;
        }
    }
    return events;
}

std::vector<Event> run_window(const ValidatedParams& params, const Window& w, Sampler& rng, SimBackend backend) {
    return backend == SimBackend::Branching ? run_branching(params, w, rng) : run_thinning(params, w, rng);
}

Vector probe(const ValidatedParams& params, const Vector& background_rate, const std::vector<Event>& sources,
             double at) {
    Vector excitation(params.n(), 0.0);
    for (const Event& e : sources) excitation[e.node] += std::exp(-params.omega() * (at - e.t));
    Vector out = params.A() * excitation;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += background_rate[i];
    return out;
}

SimResult continue_under_plan(const ValidatedParams& params, const std::vector<Event>& history,
                              const InterventionPlan& plan, double horizon, Sampler& rng, SimBackend backend) {
    Window w;
    w.start = plan.tau;
    w.end = horizon;
    const Vector rho = plan.rho();
    w.background_rate = hadamard(params.mu(), rho);
    for (const Event& e : history) {
        if (e.t > plan.tau) throw Error(ErrorCode::EventAfterTau, "history extends past tau");
        // Survival flag Z_e, drawn once per pre-tau event at an intervened node.
        const bool survives = plan.u[e.node] != 0 || rng.uniform() < plan.p;
        if (survives) w.parents.push_back(e);
    }
    SimResult out;
    out.events = run_window(params, w, rng, backend);
    out.counts_post.assign(params.n(), 0.0);
    for (const Event& e : out.events) out.counts_post[e.node] += 1.0;
    std::vector<Event> sources = w.parents;
    sources.insert(sources.end(), out.events.begin(), out.events.end());
    out.intensity_probe = probe(params, w.background_rate, sources, horizon);
    return out;
}

void check_plan(const ValidatedParams& params, const InterventionPlan& plan, double horizon) {
    plan.check(params.n());
    if (!(horizon > plan.tau)) throw Error(ErrorCode::InvalidArgument, "simulation horizon must exceed tau");
}

} // namespace

SimResult simulate(const ValidatedParams& params, const SimConfig& config) {
    if (!(params.branching_ratio() < 1.0)) throw Error(ErrorCode::NonStationary, "refusing to simulate a supercritical network");
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
        throw Error(ErrorCode::InvalidArgument, "simulation horizon must be positive");
    }
    Sampler rng(params, config.seed, config.stream);
    if (!config.intervention) {
        Window w{0.0, config.horizon, params.mu(), {}};
        SimResult out;
        out.events = run_window(params, w, rng, config.backend);
        out.counts_post = History{out.events, config.horizon}.counts(params.n());
        out.intensity_probe = probe(params, w.background_rate, out.events, config.horizon);
        return out;
    }
    const InterventionPlan& plan = *config.intervention;
    check_plan(params, plan, config.horizon);
    Window before{0.0, plan.tau, params.mu(), {}};
    std::vector<Event> history = plan.tau > 0.0 ? run_window(params, before, rng, config.backend) : std::vector<Event>{};
    SimResult out = continue_under_plan(params, history, plan, config.horizon, rng, config.backend);
    history.insert(history.end(), out.events.begin(), out.events.end());
    out.events = std::move(history);
    return out;
}

SimResult simulate_intervened(const ValidatedParams& params, const History& history, const InterventionPlan& plan,
                              const SimConfig& config) {
    if (!(params.branching_ratio() < 1.0)) throw Error(ErrorCode::NonStationary, "refusing to simulate a supercritical network");
    check_plan(params, plan, config.horizon);
    Sampler rng(params, config.seed, config.stream);
    return continue_under_plan(params, history.events, plan, config.horizon, rng, config.backend);
}

McEstimate mc_estimate(const ValidatedParams& params, const History& history, const InterventionPlan& plan,
                       std::size_t reps, std::uint64_t seed, SimBackend backend, unsigned threads) {
    if (reps == 0) throw Error(ErrorCode::InvalidArgument, "need at least one replication");
    check_plan(params, plan, plan.horizon);
    const std::size_t n = params.n();
    std::vector<Vector> counts(reps);
    std::vector<Vector> probes(reps);

    std::vector<std::exception_ptr> errors(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t r = next++; r < reps; r = next++) {
            try {
                SimConfig cfg{plan.horizon, std::nullopt, seed, r, backend};
                SimResult res = simulate_intervened(params, history, plan, cfg);
                counts[r] = std::move(res.counts_post);
                probes[r] = std::move(res.intensity_probe);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    // Rethrow the failure of the lowest replication so the error does not depend on scheduling.
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    McEstimate out;
    out.reps = reps;
    auto summarize = [&](const std::vector<Vector>& samples, Vector& mean, Vector& se, double& mean_total,
                         double& se_total) {
        mean.assign(n, 0.0);
        Vector m2(n, 0.0);
        double tot_mean = 0.0;
        double tot_m2 = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            const double k = static_cast<double>(r + 1);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double x = samples[r][i];
                total += x;
                const double d = x - mean[i];
                mean[i] += d / k;
                m2[i] += d * (x - mean[i]);
            }
            const double d = total - tot_mean;
            tot_mean += d / k;
            tot_m2 += d * (total - tot_mean);
        }
        se.assign(n, std::numeric_limits<double>::quiet_NaN());
        se_total = std::numeric_limits<double>::quiet_NaN();
        if (reps > 1) {
            const double denom = static_cast<double>(reps - 1) * static_cast<double>(reps);
            for (std::size_t i = 0; i < n; ++i) se[i] = std::sqrt(m2[i] / denom);
            se_total = std::sqrt(tot_m2 / denom);
        }
        mean_total = tot_mean;
    };
    summarize(counts, out.mean_counts, out.se_counts, out.mean_total_counts, out.se_total_counts);
    summarize(probes, out.mean_eta_T, out.se_eta_T, out.mean_total_eta, out.se_total_eta);
    return out;
}

} // namespace hawknet
