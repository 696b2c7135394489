// SPDX-License-Identifier: Apache-2.0
//
// machlim command line: thin shell over the shared-library C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "machlim.h"

namespace {

int finish(machlim_status status) {
    if (status == MACHLIM_OK) return 0;
    std::fprintf(stderr, "machlim: %s\n", machlim_status_name(status));
    const char* detail = machlim_last_error();
    if (detail && detail[0]) std::fprintf(stderr, "  %s\n", detail);
    return static_cast<int>(status);
}

struct ConfigHandle {
    machlim_config* cfg = nullptr;
    ~ConfigHandle() { machlim_config_free(cfg); }
};

machlim_status load_config(const std::string& path, ConfigHandle& h) {
    if (path.empty()) return machlim_config_parse_string("", &h.cfg);
    return machlim_config_parse_file(path.c_str(), &h.cfg);
}

void print_summary_if_any(const ConfigHandle& h) {
    char dir[512];
    if (machlim_config_get(h.cfg, "out.dir", dir, sizeof(dir)) != MACHLIM_OK) return;
    const std::string path = std::string(dir) + "/summary.txt";
    if (std::FILE* f = std::fopen(path.c_str(), "rb")) {
        char buf[4096];
        size_t got;
        while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) std::fwrite(buf, 1, got, stdout);
        std::fclose(f);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"machlim: low-Mach compressible MHD simulator suite"};
    app.require_subcommand(1);

    std::string config_path, checkpoint_path, out_csv, in_csv;

    auto* run = app.add_subcommand("run", "integrate the rescaled MHD system");
    run->add_option("config", config_path, "run configuration file")->required();

    auto* limit = app.add_subcommand("limit", "integrate the zero-Mach limit system");
    limit->add_option("config", config_path, "run configuration file")->required();
    limit->add_option("--from", checkpoint_path, "initial (w,h,vartheta,pi) checkpoint");

    auto* sweep = app.add_subcommand("sweep", "eps-sweep convergence study");
    sweep->add_option("config", config_path, "sweep plan configuration file")->required();

    auto* acoustic = app.add_subcommand("acoustic", "singular wave equation eps sweep");
    std::string eps_list, profile, sponge;
    double acoustic_T = 0.0, acoustic_L = 0.0;
    int acoustic_n = 0;
    acoustic->add_option("--config", config_path, "base configuration file");
    acoustic->add_option("--eps-list", eps_list, "comma-separated descending eps values");
    acoustic->add_option("--profile", profile, "coefficient profile: uniform | bump");
    acoustic->add_option("--sponge", sponge, "absorbing annulus: on | off");
    acoustic->add_option("--T", acoustic_T, "final time");
    acoustic->add_option("--n", acoustic_n, "grid points per axis");
    acoustic->add_option("--L", acoustic_L, "box length");
    acoustic->add_option("--out", out_csv, "CSV output path (default: stdout)");

    auto* identities = app.add_subcommand("identities", "vector identity residual suite");
    unsigned id_n = 32;
    std::uint64_t id_seed = 12345;
    int id_rounds = 20;
    identities->add_option("--n", id_n, "grid points per axis (default 32)");
    identities->add_option("--seed", id_seed, "random seed (default 12345)");
    identities->add_option("--rounds", id_rounds, "random draws per identity (default 20)");
    identities->add_option("--out", out_csv, "CSV output path (default: stdout)");

    auto* rates = app.add_subcommand("rates", "fit eps-scaling exponents from a CSV");
    rates->add_option("csv", in_csv, "input CSV (header: eps,<quantity>[,...])")->required();
    rates->add_option("--out", out_csv, "CSV output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ConfigHandle h;
        if (auto st = load_config(config_path, h); st != MACHLIM_OK) return finish(st);
        return finish(machlim_run_eps(h.cfg));
    }
    if (limit->parsed()) {
        ConfigHandle h;
        if (auto st = load_config(config_path, h); st != MACHLIM_OK) return finish(st);
        return finish(machlim_run_limit(
            h.cfg, checkpoint_path.empty() ? nullptr : checkpoint_path.c_str()));
    }
    if (sweep->parsed()) {
        ConfigHandle h;
        if (auto st = load_config(config_path, h); st != MACHLIM_OK) return finish(st);
        const machlim_status st = machlim_run_sweep(h.cfg);
        print_summary_if_any(h);
        return finish(st);
    }
    if (acoustic->parsed()) {
        ConfigHandle h;
        if (auto st = load_config(config_path, h); st != MACHLIM_OK) return finish(st);
        auto set = [&](const char* key, const std::string& value) {
            return value.empty() ? MACHLIM_OK
                                 : machlim_config_set(h.cfg, key, value.c_str());
        };
        machlim_status st = MACHLIM_OK;
        if (st == MACHLIM_OK) st = set("acoustic.eps_list", eps_list);
        if (st == MACHLIM_OK) st = set("acoustic.profile", profile);
        if (st == MACHLIM_OK) st = set("acoustic.sponge", sponge);
        if (st == MACHLIM_OK && acoustic_T > 0.0)
            st = set("acoustic.T", std::to_string(acoustic_T));
        if (st == MACHLIM_OK && acoustic_n > 0)
            st = set("acoustic.n", std::to_string(acoustic_n));
        if (st == MACHLIM_OK && acoustic_L > 0.0)
            st = set("acoustic.L", std::to_string(acoustic_L));
        if (st != MACHLIM_OK) return finish(st);
        return finish(machlim_run_acoustic(h.cfg, out_csv.empty() ? nullptr : out_csv.c_str()));
    }
    if (identities->parsed()) {
        return finish(machlim_run_identities(id_n, id_seed, id_rounds,
                                             out_csv.empty() ? nullptr : out_csv.c_str()));
    }
    if (rates->parsed()) {
        return finish(
            machlim_fit_rates(in_csv.c_str(), out_csv.empty() ? nullptr : out_csv.c_str()));
    }
    return 0;
}
