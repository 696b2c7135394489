// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace machlim {

RateFit fit_rate(const std::string& quantity,
                 const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 3)
        throw ContractViolation("fit_rate: need at least 3 (eps, value) pairs");
    for (const auto& [e, v] : series)
        if (!(e > 0.0) || !(v > 0.0))
            throw ContractViolation("fit_rate: eps and values must be positive");
    const std::size_t n = series.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(series[i].first);
        ys[i] = std::log(series[i].second);
        sx += xs[i];
        sy += ys[i];
    }
    const double xbar = sx / n, ybar = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        syy += (ys[i] - ybar) * (ys[i] - ybar);
    }
    RateFit fit;
    fit.quantity = quantity;
    fit.alpha = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;  // constant data: exact fit
    return fit;
}

void SweepPlan::validate() const {
    if (base.sweep_eps_list.size() < 3)
        throw ContractViolation("SweepPlan: eps_list must have length >= 3");
    for (std::size_t i = 0; i + 1 < base.sweep_eps_list.size(); ++i)
        if (!(base.sweep_eps_list[i] > base.sweep_eps_list[i + 1]))
            throw ContractViolation("SweepPlan: eps_list must be strictly descending");
}

std::string format_eps_dir(double eps) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "eps_%g", eps);
    return buf;
}

SweepResult run_sweep(const SweepPlan& plan) {
    plan.validate();
    const RunConfig& base = plan.base;
    namespace fs = std::filesystem;
    fs::create_directories(base.out_dir);

    SweepResult result;
    result.eps_list = plan.eps_list();

    // One accuracy cap for every trajectory in the study: the incompressible
    // gaps are O(eps)-small, so the first-order time error of both solvers
    // has to sit well below them, and a uniform cap keeps the comparison
    // against the limit reference unbiased.
    const double study_cap =
        std::min({0.25 * base.out_every, base.time_T_end / 400.0,
                  acoustic_resolution_dt(base, result.eps_list.back())});

    // Reference trajectory of the limit system, from the shared family data.
    {
        RunConfig limit_cfg = base;
        limit_cfg.init_mode = "ill_prepared";
        result.limit_run = run_limit(limit_cfg, std::nullopt,
                                     base.out_dir + "/limit_diag.csv", study_cap);
        if (result.limit_run.aborted) {
            result.assertions.push_back(
                {"limit_reference_completed", false, result.limit_run.abort_reason});
            result.ok = false;
            return result;
        }
    }

    // Member runs execute concurrently; each thread owns its FFT workspace.
    std::vector<std::future<EpsRunOutput>> futures;
    for (double eps : result.eps_list) {
        const std::string dir = base.out_dir + "/" + format_eps_dir(eps);
        fs::create_directories(dir);
        EpsRunArgs args;
        args.config = base;
        args.override_eps = eps;
        args.norm_eps = result.eps_list.front();
        args.sponge_on = plan.ill_prepared_sponged();
        if (plan.ill_prepared_sponged()) args.config.init_mode = "ill_prepared";
        args.reference = &result.limit_run.reference;
        args.diag_csv_path = dir + "/diag.csv";
        args.resolve_acoustics = true;
        args.dt_cap_override = study_cap;
        futures.push_back(std::async(std::launch::async,
                                     [a = std::move(args)]() { return run_eps(a); }));
    }
    for (auto& f : futures) result.members.push_back(f.get());

    bool all_completed = true;
    for (std::size_t i = 0; i < result.members.size(); ++i)
        if (result.members[i].aborted) {
            all_completed = false;
            result.assertions.push_back({"member_completed_" + format_eps_dir(result.eps_list[i]),
                                         false, result.members[i].abort_reason});
        }

    auto series_of = [&](auto getter) {
        std::vector<std::pair<double, double>> s;
        for (std::size_t i = 0; i < result.members.size(); ++i)
            s.emplace_back(result.eps_list[i], getter(result.members[i]));
        return s;
    };

    if (all_completed) {
        const auto q1s = series_of([](const EpsRunOutput& m) { return m.q1; });
        const auto q2s = series_of([](const EpsRunOutput& m) { return m.q2; });
        const auto q3s = series_of([](const EpsRunOutput& m) { return m.q3; });
        result.fits.push_back(fit_rate("q1_local_p", q1s));
        result.fits.push_back(fit_rate("q2_constraint", q2s));
        try {
            result.fits.push_back(fit_rate("q3_incompressible_gap", q3s));
        } catch (const ContractViolation&) {
            // q3 may be identically zero when no reference is meaningful
        }

        auto decreasing = [](const std::vector<std::pair<double, double>>& s) {
            for (std::size_t i = 0; i + 1 < s.size(); ++i)
                if (!(s[i].second > s[i + 1].second)) return false;  // eps descending
            return true;
        };
        char detail[160];

        // eps list is descending, so "decreasing in eps" means values shrink
        // along the list.
        std::snprintf(detail, sizeof(detail), "q1 = %s .. %s",
                      format_double(q1s.front().second).c_str(),
                      format_double(q1s.back().second).c_str());
        result.assertions.push_back({"q1_decreasing_in_eps", decreasing(q1s), detail});
        std::snprintf(detail, sizeof(detail), "q2 = %s .. %s",
                      format_double(q2s.front().second).c_str(),
                      format_double(q2s.back().second).c_str());
        result.assertions.push_back({"q2_decreasing_in_eps", decreasing(q2s), detail});
        std::snprintf(detail, sizeof(detail), "q3 = %s .. %s",
                      format_double(q3s.front().second).c_str(),
                      format_double(q3s.back().second).c_str());
        result.assertions.push_back({"q3_decreasing_in_eps", decreasing(q3s), detail});

        if (!plan.ill_prepared_sponged()) {
            std::snprintf(detail, sizeof(detail), "alpha = %.4f (r2 = %.4f)",
                          result.fits[0].alpha, result.fits[0].r2);
            result.assertions.push_back(
                {"q1_rate_alpha_ge_0.8", result.fits[0].alpha >= 0.8, detail});
        }

        double sup_max = 0.0, sup_min = 0.0;
        for (std::size_t i = 0; i < result.members.size(); ++i) {
            const double v = result.members[i].sup_triple;
            sup_max = i == 0 ? v : std::max(sup_max, v);
            sup_min = i == 0 ? v : std::min(sup_min, v);
        }
        std::snprintf(detail, sizeof(detail), "max/min = %.4f", sup_max / sup_min);
        result.assertions.push_back(
            {"uniform_bound_ratio_lt_2", sup_max < 2.0 * sup_min, detail});

        double max_divh = 0.0;
        for (const auto& m : result.members) max_divh = std::max(max_divh, m.max_divh_res);
        std::snprintf(detail, sizeof(detail), "max divH residual = %s",
                      format_double(max_divh).c_str());
        result.assertions.push_back({"divH_le_1e-10", max_divh <= 1e-10, detail});
    }

    result.ok = all_completed;
    for (const auto& a : result.assertions) result.ok = result.ok && a.pass;

    // rates.csv
    {
        CsvWriter csv(base.out_dir + "/rates.csv");
        csv.line("quantity,alpha,r2");
        for (const auto& f : result.fits)
            csv.line(f.quantity + "," + format_double(f.alpha) + "," + format_double(f.r2));
    }
    // summary.txt
    {
        std::ofstream out(base.out_dir + "/summary.txt", std::ios::binary | std::ios::trunc);
        out << "sweep mode=" << base.sweep_mode << " n=" << base.grid_n
            << " L=" << format_double(base.grid_L) << " T=" << format_double(base.time_T_end)
            << " seed=" << base.init_seed << "\n\n";
        out << "eps,q1_local_p,q2_constraint,q3_incompressible_gap,sup_triple_norm,steps\n";
        for (std::size_t i = 0; i < result.members.size(); ++i) {
            const auto& m = result.members[i];
            out << format_double(result.eps_list[i]) << "," << format_double(m.q1) << ","
                << format_double(m.q2) << "," << format_double(m.q3) << ","
                << format_double(m.sup_triple) << "," << m.steps << "\n";
        }
        out << "\n";
        for (const auto& f : result.fits)
            out << "fit " << f.quantity << ": alpha=" << format_double(f.alpha)
                << " r2=" << format_double(f.r2) << "\n";
        out << "\n";
        for (const auto& a : result.assertions)
            out << (a.pass ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
        out << "\noverall: " << (result.ok ? "PASS" : "FAIL") << "\n";
    }
    return result;
}

std::vector<RateFit> fit_rates_csv(const std::string& csv_in_path,
                                   const std::string& csv_out_path) {
    std::ifstream in(csv_in_path, std::ios::binary);
    if (!in) throw FormatError("cannot open csv: " + csv_in_path);
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty csv: " + csv_in_path);
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    if (cols.size() < 2 || cols[0] != "eps")
        throw FormatError("rates input must have header eps,<quantity>[,...]");
    std::vector<std::vector<std::pair<double, double>>> series(cols.size() - 1);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string item;
        std::vector<double> vals;
        while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
        if (vals.size() != cols.size())
            throw FormatError("rates csv line " + std::to_string(lineno) +
                              ": wrong column count");
        for (std::size_t c = 1; c < vals.size(); ++c)
            series[c - 1].emplace_back(vals[0], vals[c]);
    }
    std::vector<RateFit> fits;
    for (std::size_t c = 1; c < cols.size(); ++c)
        fits.push_back(fit_rate(cols[c], series[c - 1]));
    if (!csv_out_path.empty()) {
        CsvWriter csv(csv_out_path);
        csv.line("quantity,alpha,r2");
        for (const auto& f : fits)
            csv.line(f.quantity + "," + format_double(f.alpha) + "," + format_double(f.r2));
    }
    return fits;
}

}  // namespace machlim
