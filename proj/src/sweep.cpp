#include "ofudiff/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace ofudiff {

void SweepConfig::validate() const {
    require(!epsilons.empty() && !horizons.empty() && !seeds.empty(),
            "SweepConfig: epsilon/horizon/seed lists must be nonempty");
    for (double e : epsilons) require(e > 0.0 && e <= 1.0, "SweepConfig: epsilon in (0,1]");
    for (double t : horizons) require(t > 0.0, "SweepConfig: positive horizons");
}

double median(std::vector<double> v) {
    require(!v.empty(), "median: empty");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

static double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    require(n >= 2, "loglog_slope: need at least two positive points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepRow run_cell(const SweepConfig& cfg, double epsilon, double horizon, std::uint64_t seed,
                  PlannerCache& cache, const HjbSolution& truth, const HjbSolution& diffusive_truth,
                  AgentResult* keep_run) {
    SweepRow row;
    row.epsilon = epsilon;
    row.horizon = horizon;
    row.seed = seed;
    try {
        ModelSpec env = cfg.model.with_epsilon(epsilon);
        ClockConfig clock{epsilon, horizon, seed};
        const double rho_star = truth.rho;
        row.rho_star = rho_star;
        row.rho_bar_star = diffusive_truth.rho;
        row.gain_gap = std::abs(diffusive_truth.rho - truth.rho);

        AgentResult run = run_agent(cfg.agent, env, clock, &cache, &rho_star);
        if (run.aborted) row.status = "aborted: " + run.abort_reason;
        row.n_events = run.log.n_events();
        row.episodes = run.episodes.size();

        RegretReport rep = compute_regret(run.log, rho_star);
        fill_event_flags(rep, run, env, cfg.agent.delta);
        if (cfg.decompose) {
            DecompositionInputs in =
                make_decomposition_inputs(run, env, cache, cfg.agent.planner.solver);
            decompose_regret(rep, run.log, run.episodes, in, env);
            row.has_decomposition = rep.decomposition_available;
            row.r1 = rep.r1_clock;
            row.r2 = rep.r2_optimism;
            row.r3 = rep.r3_prediction;
            row.r4 = rep.r4_switching;
            row.r5 = rep.r5_martingale;
            row.r3_tight = rep.r3_tight;
            row.reconstruction_gap = rep.reconstruction_gap;
            row.budget = rep.budget;
        }
        row.regret = rep.regret;
        row.regret_rate = rep.regret / horizon;
        row.coverage_ok = rep.coverage_ok;
        row.state_bound_ok = rep.state_bound_ok;
        row.clock_ok = rep.clock_ok;

        if (cfg.oracle_baseline) {
            auto sol = std::make_shared<HjbSolution>(truth);
            GreedyPolicy oracle(sol, std::make_shared<ModelSpec>(env));
            EventLog olog = rollout(oracle, env, clock, cfg.agent.x0.size() == env.d()
                                                            ? cfg.agent.x0
                                                            : Vec::Zero(env.d()));
            row.oracle_regret = compute_regret(olog, rho_star).regret;
        }
        if (keep_run != nullptr) *keep_run = std::move(run);
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

SweepResult run_sweep(const SweepConfig& cfg, PlannerCache* cache) {
    cfg.validate();
    PlannerCache local;
    PlannerCache& plans = cache != nullptr ? *cache : local;

    // Ground-truth solves per epsilon, on a finer grid than the planner's.
    std::map<double, std::pair<HjbSolution, HjbSolution>> truths;
    for (double eps : cfg.epsilons) {
        ModelSpec env = cfg.model.with_epsilon(eps);
        ClockConfig clock{eps, *std::max_element(cfg.horizons.begin(), cfg.horizons.end()), 0};
        AgentConfig probe = cfg.agent;
        // Match the agent's automatic grid radius so plans transfer.
        double radius = probe.planner.grid_radius;
        if (radius <= 0.0) {
            StateBound bound = StateBound::from_model(env, probe.x0.size() == env.d()
                                                               ? probe.x0
                                                               : Vec::Zero(env.d()));
            const auto expected =
                static_cast<std::size_t>(std::ceil(2.0 * clock.horizon / eps)) + 1;
            radius = 1.5 * bound.h_delta(expected, probe.delta);
        }
        Grid fine = make_grid(env.d(), radius, cfg.agent.planner.grid_spacing * cfg.truth_spacing_factor,
                              env.meta(), cfg.agent.planner.actions_per_axis);
        HjbSolution jump = *plans.jump(env, fine, cfg.agent.planner.solver);
        require(jump.converged, "run_sweep: ground-truth jump solve did not converge");
        HjbSolution diff = *plans.diffusive(env, fine, cfg.agent.planner.solver);
        require(diff.converged, "run_sweep: ground-truth diffusive solve did not converge");
        truths.emplace(eps, std::make_pair(std::move(jump), std::move(diff)));
    }

    struct Cell {
        double eps, horizon;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double e : cfg.epsilons)
        for (double t : cfg.horizons)
            for (std::uint64_t s : cfg.seeds) cells.push_back({e, t, s});

    SweepResult result;
    result.rows.resize(cells.size());
    const int jobs = std::max(1, cfg.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            const auto& truth = truths.at(c.eps);
            result.rows[i] =
                run_cell(cfg, c.eps, c.horizon, c.seed, plans, truth.first, truth.second, nullptr);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::future<void>> pool;
        for (int j = 0; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }
    result.summary = summarize(result.rows);
    return result;
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows) {
    std::map<std::pair<double, double>, std::vector<const SweepRow*>> cells;
    for (const SweepRow& r : rows) cells[{r.epsilon, r.horizon}].push_back(&r);
    std::vector<SweepSummaryRow> out;
    for (const auto& [key, group] : cells) {
        SweepSummaryRow s;
        s.epsilon = key.first;
        s.horizon = key.second;
        s.runs = static_cast<int>(group.size());
        std::vector<double> regret, rate, oracle, episodes;
        for (const SweepRow* r : group) {
            if (r->status != "ok" && r->status.rfind("aborted", 0) != 0) {
                ++s.failures;
                continue;
            }
            regret.push_back(r->regret);
            rate.push_back(r->regret_rate);
            episodes.push_back(static_cast<double>(r->episodes));
            if (std::isfinite(r->oracle_regret)) oracle.push_back(r->oracle_regret);
            if (!r->coverage_ok) ++s.coverage_violations;
            if (!r->state_bound_ok) ++s.state_bound_violations;
            if (!r->clock_ok) ++s.clock_violations;
            s.gain_gap = r->gain_gap;
        }
        if (!regret.empty()) {
            s.regret_median = median(regret);
            s.regret_iqr = quantile(regret, 0.75) - quantile(regret, 0.25);
            s.regret_rate_median = median(rate);
            s.episodes_median = median(episodes);
            if (!oracle.empty()) s.oracle_regret_median = median(oracle);
        }
        out.push_back(s);
    }
    return out;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_runs_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "epsilon,horizon,seed,status,n_events,episodes,regret,regret_rate,oracle_regret,"
           "rho_star,rho_bar_star,gain_gap,coverage_ok,state_bound_ok,clock_ok,"
           "r1,r2,r3,r4,r5,r3_tight,reconstruction_gap,budget\n";
    for (const SweepRow& r : rows) {
        put(out, r.epsilon);
        out << ",";
        put(out, r.horizon);
        out << "," << r.seed << "," << (r.status == "ok" ? "ok" : "fail") << "," << r.n_events
            << "," << r.episodes << ",";
        put(out, r.regret);
        out << ",";
        put(out, r.regret_rate);
        out << ",";
        put(out, r.oracle_regret);
        out << ",";
        put(out, r.rho_star);
        out << ",";
        put(out, r.rho_bar_star);
        out << ",";
        put(out, r.gain_gap);
        out << "," << (r.coverage_ok ? 1 : 0) << "," << (r.state_bound_ok ? 1 : 0) << ","
            << (r.clock_ok ? 1 : 0);
        const double decomp[8] = {r.r1, r.r2, r.r3, r.r4, r.r5, r.r3_tight, r.reconstruction_gap,
                                  r.budget};
        for (double v : decomp) {
            out << ",";
            put(out, r.has_decomposition ? v : std::numeric_limits<double>::quiet_NaN());
        }
        out << "\n";
    }
}

std::vector<SweepRow> read_runs_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "runs csv: missing header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        require(cells.size() >= 23, "runs csv: bad row width");
        SweepRow r;
        r.epsilon = std::stod(cells[0]);
        r.horizon = std::stod(cells[1]);
        r.seed = std::stoull(cells[2]);
        r.status = cells[3] == "ok" ? "ok" : "error: recorded failure";
        r.n_events = std::stoull(cells[4]);
        r.episodes = std::stoull(cells[5]);
        r.regret = std::stod(cells[6]);
        r.regret_rate = std::stod(cells[7]);
        r.oracle_regret = std::stod(cells[8]);
        r.rho_star = std::stod(cells[9]);
        r.rho_bar_star = std::stod(cells[10]);
        r.gain_gap = std::stod(cells[11]);
        r.coverage_ok = cells[12] == "1";
        r.state_bound_ok = cells[13] == "1";
        r.clock_ok = cells[14] == "1";
        r.r1 = std::stod(cells[15]);
        r.has_decomposition = std::isfinite(r.r1);
        r.r2 = std::stod(cells[16]);
        r.r3 = std::stod(cells[17]);
        r.r4 = std::stod(cells[18]);
        r.r5 = std::stod(cells[19]);
        r.r3_tight = std::stod(cells[20]);
        r.reconstruction_gap = std::stod(cells[21]);
        r.budget = std::stod(cells[22]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out) {
    out << "epsilon,horizon,runs,failures,regret_median,regret_iqr,regret_rate_median,"
           "oracle_regret_median,episodes_median,gain_gap,coverage_violations,"
           "state_bound_violations,clock_violations\n";
    for (const SweepSummaryRow& s : rows) {
        put(out, s.epsilon);
        out << ",";
        put(out, s.horizon);
        out << "," << s.runs << "," << s.failures << ",";
        put(out, s.regret_median);
        out << ",";
        put(out, s.regret_iqr);
        out << ",";
        put(out, s.regret_rate_median);
        out << ",";
        put(out, s.oracle_regret_median);
        out << ",";
        put(out, s.episodes_median);
        out << ",";
        put(out, s.gain_gap);
        out << "," << s.coverage_violations << "," << s.state_bound_violations << ","
            << s.clock_violations << "\n";
    }
}

}  // namespace ofudiff
