#include "hawknet/estimator.hpp"

#include "hawknet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hawknet {

namespace {

constexpr double kTwoPi = 6.283185307179586;
// exp(-40) ~ 4e-18: pairs beyond this many kernel scales are dropped.
constexpr double kCutoff = 40.0;
constexpr double kAscentSlack = 1e-8;

double gauss2(double d2, double scale) {
    const double s2 = scale * scale;
    return std::exp(-d2 / (2.0 * s2)) / (kTwoPi * s2);
}

double dist2(const Event& a, const Event& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Theta {
    Matrix b;      // n x n background weights
    Matrix a_norm; // n x n influence, unit-mass kernel
    double omega{1.0};
    double sigma{1.0};
    double delta{1.0};
};

struct Sufficient {
    double log_lik{0.0};
    Matrix bg_count;   // expected background events at u attributed to anchors at v
    Matrix trig_count; // expected offspring at u with parent at v
    double sum_p{0.0};
    double sum_p_dt{0.0};
    double sum_p_d2{0.0};
    double bg_total{0.0};
    double bg_d2{0.0};
    ResponsibilityDigest digest;
};

class EmProblem {
public:
    EmProblem(const History& h, std::size_t n) : events_(h.events), n_(n), window_(h.horizon), node_count_(n, 0.0) {
        for (const Event& e : events_) node_count_[e.node] += 1.0;
    }

    // E-step at theta; also evaluates the log-likelihood at theta.
    Sufficient expect(const Theta& th) const {
        const std::size_t count = events_.size();
        Sufficient s;
        s.bg_count = Matrix(n_, n_);
        s.trig_count = Matrix(n_, n_);
        const double dt_max = kCutoff / th.omega;
        const double bg_d2_max = 2.0 * kCutoff * th.delta * th.delta;
        const double trig_d2_max = 2.0 * kCutoff * th.sigma * th.sigma;
        Vector kde(n_);
        Vector kde_d2(n_);
        std::vector<std::pair<std::size_t, double>> parents; // (j, term)
        double max_err = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const Event& ek = events_[k];
            std::fill(kde.begin(), kde.end(), 0.0);
            std::fill(kde_d2.begin(), kde_d2.end(), 0.0);
            for (std::size_t i = 0; i < count; ++i) {
                if (i == k) continue;
                const double d2 = dist2(ek, events_[i]);
                if (d2 > bg_d2_max) continue;
                const double g = gauss2(d2, th.delta);
                kde[events_[i].node] += g;
                kde_d2[events_[i].node] += g * d2;
            }
            double bg = 0.0;
            for (std::size_t v = 0; v < n_; ++v) bg += th.b(ek.node, v) * kde[v];
            bg /= window_;

            parents.clear();
            double trig = 0.0;
            for (std::size_t j = k; j-- > 0;) {
                const Event& ej = events_[j];
                const double dt = ek.t - ej.t;
                if (dt > dt_max) break;
                if (dt <= 0.0) continue;
                const double d2 = dist2(ek, ej);
                if (d2 > trig_d2_max) continue;
                const double term = th.a_norm(ek.node, ej.node) * th.omega * std::exp(-th.omega * dt) * gauss2(d2, th.sigma);
                if (term <= 0.0) continue;
                parents.emplace_back(j, term);
                trig += term;
            }

            const double lambda = bg + trig;
            if (!(lambda > 0.0) || !std::isfinite(lambda)) {
                throw Error(ErrorCode::NonFinite, "event " + std::to_string(k) + " has zero intensity");
            }
            s.log_lik += std::log(lambda);

            double row = 0.0;
            for (std::size_t v = 0; v < n_; ++v) {
                const double r = th.b(ek.node, v) * kde[v] / window_ / lambda;
                s.bg_count(ek.node, v) += r;
                s.bg_d2 += th.b(ek.node, v) * kde_d2[v] / window_ / lambda;
                row += r;
            }
            s.bg_total += bg / lambda;
            s.digest.mean_background += bg / lambda;
            if (bg / lambda < 0.5) s.digest.triggered_fraction += 1.0;
            for (const auto& [j, term] : parents) {
                const double pr = term / lambda;
                const Event& ej = events_[j];
                s.trig_count(ek.node, ej.node) += pr;
                s.sum_p += pr;
                s.sum_p_dt += pr * (ek.t - ej.t);
                s.sum_p_d2 += pr * dist2(ek, ej);
                row += pr;
            }
            max_err = std::max(max_err, std::abs(row - 1.0));
        }
        s.digest.mean_background /= static_cast<double>(count);
        s.digest.triggered_fraction /= static_cast<double>(count);
        s.digest.max_row_error = max_err;
        s.log_lik -= compensator(th);
        return s;
    }

    double compensator(const Theta& th) const {
        double total = 0.0;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) total += th.b(u, v) * node_count_[v];
        Vector out_strength(n_, 0.0);
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) out_strength[v] += th.a_norm(u, v);
        for (const Event& e : events_) total += out_strength[e.node] * -std::expm1(-th.omega * (window_ - e.t));
        return total;
    }

    // Conditional maximization of the expected complete-data log-likelihood.
    Theta maximize(const Theta& old, const Sufficient& s, bool update_delta) const {
        Theta th = old;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) th.b(u, v) = node_count_[v] > 0.0 ? s.bg_count(u, v) / node_count_[v] : 0.0;

        Vector exposure(n_, 0.0);
        for (const Event& e : events_) exposure[e.node] += -std::expm1(-old.omega * (window_ - e.t));
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) th.a_norm(u, v) = exposure[v] > 0.0 ? s.trig_count(u, v) / exposure[v] : 0.0;

        if (s.sum_p > 0.0 && s.sum_p_dt > 0.0) th.omega = maximize_omega(th, s, old.omega);
        if (s.sum_p > 0.0 && s.sum_p_d2 > 0.0) th.sigma = std::sqrt(s.sum_p_d2 / (2.0 * s.sum_p));
        if (update_delta && s.bg_total > 0.0 && s.bg_d2 > 0.0) th.delta = std::sqrt(s.bg_d2 / (2.0 * s.bg_total));
        return th;
    }

    [[nodiscard]] const std::vector<Event>& events() const { return events_; }
    [[nodiscard]] double window() const { return window_; }
    [[nodiscard]] const Vector& node_count() const { return node_count_; }

private:
    // omega-part of Q with the new influence matrix held fixed.
    double q_omega(const Theta& th, const Sufficient& s, double omega) const {
        Vector out_strength(n_, 0.0);
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) out_strength[v] += th.a_norm(u, v);
        double q = s.sum_p * std::log(omega) - omega * s.sum_p_dt;
        for (const Event& e : events_) q -= out_strength[e.node] * -std::expm1(-omega * (window_ - e.t));
        return q;
    }

    double maximize_omega(const Theta& th, const Sufficient& s, double current) const {
        // Coarse log-grid around the closed-form start, then golden-section refinement.
        const double start = s.sum_p / s.sum_p_dt;
        double best = current;
        double best_q = q_omega(th, s, current);
        const double lo_log = std::log(std::min(start, current)) - std::log(4.0);
        const double hi_log = std::log(std::max(start, current)) + std::log(4.0);
        constexpr int kGrid = 48;
        double grid_best = start;
        double grid_q = q_omega(th, s, start);
        for (int g = 0; g <= kGrid; ++g) {
            const double w = std::exp(lo_log + (hi_log - lo_log) * g / kGrid);
            const double q = q_omega(th, s, w);
            if (q > grid_q) {
                grid_q = q;
                grid_best = w;
            }
        }
        double a = std::log(grid_best) - (hi_log - lo_log) / kGrid;
        double b = std::log(grid_best) + (hi_log - lo_log) / kGrid;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double qc = q_omega(th, s, std::exp(c));
        double qd = q_omega(th, s, std::exp(d));
        for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
            if (qc > qd) {
                b = d;
                d = c;
                qd = qc;
                c = b - phi * (b - a);
                qc = q_omega(th, s, std::exp(c));
            } else {
                a = c;
                c = d;
                qc = qd;
                d = a + phi * (b - a);
                qd = q_omega(th, s, std::exp(d));
            }
        }
        const double refined = std::exp(0.5 * (a + b));
        for (double cand : {grid_best, refined}) {
            const double q = q_omega(th, s, cand);
            if (q > best_q) {
                best_q = q;
                best = cand;
            }
        }
        return best;
    }

    std::vector<Event> events_;
    std::size_t n_;
    double window_;
    Vector node_count_;
};

Theta initial_theta(const History& h, std::size_t n, const EMConfig& config) {
    const auto count = static_cast<double>(h.events.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const Event& e : h.events) {
        mean_x += e.x;
        mean_y += e.y;
    }
    mean_x /= count;
    mean_y /= count;
    double var = 0.0;
    for (const Event& e : h.events) var += (e.x - mean_x) * (e.x - mean_x) + (e.y - mean_y) * (e.y - mean_y);
    double spread = std::sqrt(var / (2.0 * (count - 1.0)));
    if (!(spread > 0.0)) spread = 1.0;

    const double span = h.events.back().t - h.events.front().t;
    const double mean_gap = span / (count - 1.0);
    Theta th;
    th.omega = config.init.omega.value_or(mean_gap > 0.0 ? 1.0 / mean_gap : 1.0);
    th.sigma = config.init.sigma.value_or(spread);
    th.delta = config.init.delta.value_or(spread);
    th.a_norm = Matrix(n, n, 0.5 / static_cast<double>(n));
    Vector per_node(n, 0.0);
    for (const Event& e : h.events) per_node[e.node] += 1.0;
    th.b = Matrix(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) th.b(u, v) = 0.5 * per_node[u] / count;
    return th;
}

struct RunResult {
    Theta theta;
    std::vector<double> trace;
    ResponsibilityDigest digest;
    std::size_t iterations{0};
    bool converged{false};
};

RunResult run_em(const History& h, std::size_t n, const EMConfig& config, std::optional<double> fixed_delta) {
    EmProblem problem(h, n);
    RunResult out;
    out.theta = initial_theta(h, n, config);
    if (fixed_delta) out.theta.delta = *fixed_delta;
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        const Sufficient s = problem.expect(out.theta);
        out.digest = s.digest;
        out.iterations = iter + 1;
        if (!out.trace.empty()) {
            const double prev = out.trace.back();
            if (s.log_lik < prev - kAscentSlack * std::max(1.0, std::abs(prev))) {
                throw Error(ErrorCode::NoImprovement, "log-likelihood decreased from " + std::to_string(prev) + " to " +
                                                          std::to_string(s.log_lik));
            }
            out.trace.push_back(s.log_lik);
            if (std::abs(s.log_lik - prev) <= config.tol * std::max(1.0, std::abs(prev))) {
                out.converged = true;
                break;
            }
        } else {
            out.trace.push_back(s.log_lik);
        }
        if (iter + 1 == config.max_iters) break;
        out.theta = problem.maximize(out.theta, s, !fixed_delta.has_value());
    }
    return out;
}

NetworkParams to_params(const Theta& th, const History& h, std::size_t n) {
    NetworkParams p;
    p.n = n;
    p.omega = th.omega;
    p.sigma = th.sigma;
    p.A = canonicalize_triggering(th.a_norm, th.omega, true);
    WeightedKdeBackground kde;
    kde.delta = th.delta;
    kde.window = h.horizon;
    kde.beta = Matrix(n, h.events.size());
    for (std::size_t k = 0; k < h.events.size(); ++k) {
        kde.anchors.push_back({h.events[k].x, h.events[k].y});
        for (std::size_t u = 0; u < n; ++u) kde.beta(u, k) = th.b(u, h.events[k].node);
    }
    p.background = std::move(kde);
    return p;
}

} // namespace

EMFit em_fit(const History& history, std::size_t n, const EMConfig& config) {
    if (history.events.size() < 2) throw Error(ErrorCode::TooFewEvents, "EM needs at least two events");
    if (config.max_iters < 1 || !(config.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad EM configuration");
    History h = history;
    h.normalize();
    for (const Event& e : h.events)
        if (e.node >= n) throw Error(ErrorCode::InvalidArgument, "event node index out of range");
    if (!(h.horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "observation window must be positive");

    std::optional<double> fixed_delta;
    if (!config.bandwidth_grid.empty()) {
        const double split = h.horizon * (1.0 - config.holdout_fraction);
        History train{{}, split};
        for (const Event& e : h.events)
            if (e.t <= split) train.events.push_back(e);
        if (train.events.size() < 2) throw Error(ErrorCode::TooFewEvents, "training split has fewer than two events");
        double best_score = -std::numeric_limits<double>::infinity();
        for (double candidate : config.bandwidth_grid) {
            if (!(candidate > 0.0)) throw Error(ErrorCode::BadScale, "bandwidth candidates must be positive");
            const RunResult fit = run_em(train, n, config, candidate);
            const NetworkParams trained = to_params(fit.theta, train, n);
            const double score = log_likelihood(h, trained, LikelihoodOptions{false, split});
            if (score > best_score) {
                best_score = score;
                fixed_delta = candidate;
            }
        }
    }

    const RunResult run = run_em(h, n, config, fixed_delta);
    EMFit fit;
    fit.params = to_params(run.theta, h, n);
    fit.a_normalized = run.theta.a_norm;
    fit.node_beta = run.theta.b;
    fit.beta = std::get<WeightedKdeBackground>(fit.params.background).beta;
    fit.delta = run.theta.delta;
    fit.log_lik_trace = run.trace;
    fit.digest = run.digest;
    fit.iterations = run.iterations;
    fit.converged = run.converged;
    return fit;
}

double log_likelihood(const History& history, const NetworkParams& params, const LikelihoodOptions& options) {
    const auto& events = history.events;
    const double end = history.horizon;
    const double start = options.window_start;
    if (!(end > start)) throw Error(ErrorCode::InvalidArgument, "likelihood window is empty");
    const Matrix& a = params.A;
    const double omega = params.omega;
    const auto* kde = std::get_if<WeightedKdeBackground>(&params.background);
    const auto* single = std::get_if<SingleGaussianBackground>(&params.background);
    if (kde != nullptr && options.exclude_self_anchor && kde->anchors.size() != events.size()) {
        throw Error(ErrorCode::InvalidArgument, "self-anchor exclusion needs one anchor per event");
    }

    double ll = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const Event& ek = events[k];
        if (ek.t <= start) continue;
        double bg = 0.0;
        if (single != nullptr) {
            bg = single->mu[ek.node] * gauss2(ek.x * ek.x + ek.y * ek.y, single->sigma0);
        } else {
            for (std::size_t i = 0; i < kde->anchors.size(); ++i) {
                if (options.exclude_self_anchor && i == k) continue;
                const double dx = ek.x - kde->anchors[i].x;
                const double dy = ek.y - kde->anchors[i].y;
                bg += kde->beta(ek.node, i) * gauss2(dx * dx + dy * dy, kde->delta);
            }
            bg /= kde->window;
        }
        double trig = 0.0;
        for (std::size_t j = 0; j < events.size(); ++j) {
            const double dt = ek.t - events[j].t;
            if (dt <= 0.0) continue;
            trig += a(ek.node, events[j].node) * std::exp(-omega * dt) * gauss2(dist2(ek, events[j]), params.sigma);
        }
        const double lambda = bg + trig;
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw Error(ErrorCode::NonFinite, "event " + std::to_string(k) + " has zero intensity");
        }
        ll += std::log(lambda);
    }

    const Vector mass = background_mass(params.background);
    ll -= sum(mass) * (end - start);
    Vector out_strength(params.n, 0.0);
    for (std::size_t u = 0; u < params.n; ++u)
        for (std::size_t v = 0; v < params.n; ++v) out_strength[v] += a(u, v);
    for (const Event& e : events) {
        if (e.t >= end) continue;
        const double from = std::max(0.0, start - e.t);
        ll -= out_strength[e.node] * (std::exp(-omega * from) - std::exp(-omega * (end - e.t))) / omega;
    }
    return ll;
}

} // namespace hawknet
