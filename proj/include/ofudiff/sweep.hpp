#pragma once

#include "ofudiff/agent.hpp"
#include "ofudiff/regret.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace ofudiff {

struct SweepConfig {
    ModelSpec model;  // epsilon field overridden per cell
    AgentConfig agent;
    std::vector<double> epsilons;
    std::vector<double> horizons;
    std::vector<std::uint64_t> seeds;
    bool oracle_baseline = true;
    bool decompose = false;
    double truth_spacing_factor = 0.5;  // truth grid spacing = planner spacing * factor
    std::string out_dir;
    int jobs = 1;

    void validate() const;
};

struct SweepRow {
    double epsilon = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    std::size_t n_events = 0;
    std::size_t episodes = 0;
    double regret = 0.0;
    double regret_rate = 0.0;
    double oracle_regret = std::numeric_limits<double>::quiet_NaN();
    double rho_star = 0.0;
    double rho_bar_star = 0.0;
    double gain_gap = 0.0;  // |rho_bar* - rho*| at theta*
    bool coverage_ok = true;
    bool state_bound_ok = true;
    bool clock_ok = true;
    bool has_decomposition = false;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0;
    double r3_tight = 0.0, reconstruction_gap = 0.0, budget = 0.0;
};

struct SweepSummaryRow {
    double epsilon = 0.0;
    double horizon = 0.0;
    int runs = 0;
    int failures = 0;
    double regret_median = 0.0, regret_iqr = 0.0;
    double regret_rate_median = 0.0;
    double oracle_regret_median = std::numeric_limits<double>::quiet_NaN();
    double episodes_median = 0.0;
    double gain_gap = 0.0;
    int coverage_violations = 0, state_bound_violations = 0, clock_violations = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // deterministic (epsilon, horizon, seed) order
    std::vector<SweepSummaryRow> summary;
};

// One row per (epsilon, horizon, seed); failed runs are recorded with their
// error text and the sweep continues.  Cells may run concurrently; the row
// order never depends on scheduling.
SweepResult run_sweep(const SweepConfig& cfg, PlannerCache* cache = nullptr);

// Single agent run packaged as a sweep cell (shared implementation).
SweepRow run_cell(const SweepConfig& cfg, double epsilon, double horizon, std::uint64_t seed,
                  PlannerCache& cache, const HjbSolution& truth, const HjbSolution& diffusive_truth,
                  AgentResult* keep_run = nullptr);

void write_runs_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_runs_csv(std::istream& in);
void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out);
std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows);

double median(std::vector<double> values);
// Least-squares slope of log(y) against log(x); ignores non-positive pairs.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ofudiff
