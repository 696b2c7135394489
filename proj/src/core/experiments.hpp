// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "run.hpp"

namespace machlim {

struct RateFit {
    std::string quantity;
    double alpha = 0.0;  // fitted exponent in C * eps^alpha
    double r2 = 1.0;

    bool operator==(const RateFit&) const = default;
};

// Least-squares slope of log(value) against log(eps).  Requires >= 3 pairs
// with positive values.
RateFit fit_rate(const std::string& quantity,
                 const std::vector<std::pair<double, double>>& series);

struct SweepPlan {
    RunConfig base;  // sweep.* keys select eps list and mode

    std::vector<double> eps_list() const { return base.sweep_eps_list; }
    bool ill_prepared_sponged() const { return base.sweep_mode == "ill_prepared_sponged"; }
    void validate() const;
};

struct SweepAssertion {
    std::string name;
    bool pass;
    std::string detail;
};

struct SweepResult {
    std::vector<double> eps_list;
    std::vector<EpsRunOutput> members;   // one per eps, same order
    LimitRunOutput limit_run;
    std::vector<RateFit> fits;           // q1_local_p, q2_constraint, q3_incompressible_gap
    std::vector<SweepAssertion> assertions;
    bool ok = false;
};

// Runs the eps sweep (members concurrently) against the shared limit-solver
// reference, writes out_dir/eps_<value>/diag.csv, out_dir/limit_diag.csv,
// out_dir/rates.csv and out_dir/summary.txt, and evaluates the sweep
// assertions (monotonicity, rate, uniform bound).
SweepResult run_sweep(const SweepPlan& plan);

// CSV helpers for the `rates` subcommand: input has a header whose first
// column is eps; every remaining column is fitted.
std::vector<RateFit> fit_rates_csv(const std::string& csv_in_path,
                                   const std::string& csv_out_path);

std::string format_eps_dir(double eps);

}  // namespace machlim
