#include "ofudiff/event_log.hpp"

#include "ofudiff/state_bound.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ofudiff {

double EventLog::reward_sum() const { return std::accumulate(rewards.begin(), rewards.end(), 0.0); }

void EventLog::validate() const {
    require(!states.empty(), "EventLog: empty");
    require(arrivals.size() == states.size() && actions.size() == states.size(),
            "EventLog: arrivals/states/actions length mismatch");
    require(rewards.size() + 1 == states.size(), "EventLog: rewards must have one entry fewer");
    require(marks.size() + 1 == states.size(), "EventLog: marks must have one entry fewer");
    require(arrivals.front() == 0.0, "EventLog: tau_0 must be 0");
    for (std::size_t i = 1; i < arrivals.size(); ++i)
        require(arrivals[i] > arrivals[i - 1], "EventLog: arrivals must be strictly increasing");
}

Vec step(const Vec& x, const Vec& a, const ModelSpec& model, const Vec& mark) {
    const double eps = model.epsilon();
    Vec next = x + eps * model.drift_bar(x, a) + std::sqrt(eps) * (model.sigma_bar() * mark);
    if (!next.allFinite()) throw Error("step: model evaluation fault (non-finite state)");
    return next;
}

EventLog rollout(const Policy& policy, const ModelSpec& model, const ClockConfig& cfg,
                 const Vec& x0, const RolloutOptions& opts) {
    cfg.validate();
    require(x0.size() == model.d(), "rollout: x0 dimension mismatch");

    RngStream clock_stream(cfg.seed, Stream::clock);
    RngStream mark_stream(cfg.seed, Stream::marks);
    const std::vector<double> arrivals = sample_arrivals(cfg, clock_stream);

    StateBound guard;
    const bool have_guard = model.lyapunov().has_value();
    if (have_guard) guard = StateBound::from_model(model, x0);
    auto cap = [&](std::size_t n) {
        if (opts.hard_cap > 0.0) return opts.hard_cap;
        return have_guard ? opts.cap_factor * guard.h_delta(n, opts.guard_delta) : 1e6;
    };

    EventLog log;
    log.horizon = cfg.horizon;
    log.arrivals.push_back(0.0);
    log.states.push_back(x0);
    log.actions.push_back(model.meta().clamp_action(policy(x0)));

    for (std::size_t n = 1; n <= arrivals.size(); ++n) {
        Vec mark = mark_stream.gaussian_vec(model.d());
        Vec x = step(log.states.back(), log.actions.back(), model, mark);
        log.arrivals.push_back(arrivals[n - 1]);
        log.marks.push_back(std::move(mark));
        log.states.push_back(x);
        log.actions.push_back(model.meta().clamp_action(policy(x)));
        log.rewards.push_back(model.epsilon() *
                              model.reward_bar(log.states.back(), log.actions.back()));
        if (x.norm() > cap(n)) {
            log.exploded = true;
            break;
        }
    }
    return log;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_event_log_csv(const EventLog& log, std::ostream& out) {
    log.validate();
    const int d = static_cast<int>(log.states.front().size());
    const int da = static_cast<int>(log.actions.front().size());
    out << "n,tau";
    for (int i = 1; i <= d; ++i) out << ",x_" << i;
    for (int i = 1; i <= da; ++i) out << ",a_" << i;
    out << ",reward";
    for (int i = 1; i <= d; ++i) out << ",xi_" << i;
    out << "\n";
    for (std::size_t n = 0; n < log.states.size(); ++n) {
        out << n << ",";
        put(out, log.arrivals[n]);
        for (int i = 0; i < d; ++i) {
            out << ",";
            put(out, log.states[n][i]);
        }
        for (int i = 0; i < da; ++i) {
            out << ",";
            put(out, log.actions[n][i]);
        }
        out << ",";
        put(out, n == 0 ? 0.0 : log.rewards[n - 1]);
        for (int i = 0; i < d; ++i) {
            out << ",";
            put(out, n == 0 ? 0.0 : log.marks[n - 1][i]);
        }
        out << "\n";
    }
}

EventLog read_event_log_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "event log csv: missing header");
    int d = 0, da = 0;
    {
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) {
            if (col.rfind("x_", 0) == 0) ++d;
            else if (col.rfind("a_", 0) == 0) ++da;
        }
    }
    require(d > 0 && da > 0, "event log csv: header lacks x_/a_ columns");

    EventLog log;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
        require(cells.size() == static_cast<std::size_t>(2 + d + da + 1 + d),
                "event log csv: bad row width");
        const std::size_t n = static_cast<std::size_t>(cells[0]);
        log.arrivals.push_back(cells[1]);
        log.states.push_back(Eigen::Map<const Vec>(cells.data() + 2, d));
        log.actions.push_back(Eigen::Map<const Vec>(cells.data() + 2 + d, da));
        if (n > 0) {
            log.rewards.push_back(cells[2 + d + da]);
            log.marks.push_back(Eigen::Map<const Vec>(cells.data() + 3 + d + da, d));
        }
    }
    log.horizon = log.arrivals.empty() ? 0.0 : log.arrivals.back();
    log.validate();
    return log;
}

}  // namespace ofudiff
