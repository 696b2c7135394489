// SPDX-License-Identifier: Apache-2.0
#include "machlim.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "acoustic.hpp"
#include "checkpoint.hpp"
#include "config.hpp"
#include "diagnostics.hpp"
#include "experiments.hpp"
#include "identities.hpp"
#include "run.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <class Fn>
machlim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const machlim::ConfigError& e) {
        set_error(e.what());
        return MACHLIM_ERR_CONFIG;
    } catch (const machlim::ContractViolation& e) {
        set_error(e.what());
        return MACHLIM_ERR_INVALID_ARGUMENT;
    } catch (const machlim::NumericError& e) {
        set_error(e.what());
        return MACHLIM_ERR_NUMERIC;
    } catch (const machlim::ConvergenceError& e) {
        set_error(e.what());
        return MACHLIM_ERR_CONVERGENCE;
    } catch (const machlim::FormatError& e) {
        set_error(e.what());
        return MACHLIM_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MACHLIM_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return MACHLIM_ERR_INTERNAL;
    }
}

// Stream-or-file sink for CSV emission.
class CsvSink {
public:
    explicit CsvSink(const char* path) {
        if (path) {
            file_ = std::fopen(path, "wb");
            if (!file_) throw machlim::FormatError(std::string("cannot open csv: ") + path);
        }
    }
    ~CsvSink() {
        if (file_) std::fclose(file_);
    }
    void line(const std::string& s) {
        std::FILE* f = file_ ? file_ : stdout;
        std::fputs(s.c_str(), f);
        std::fputc('\n', f);
    }

private:
    std::FILE* file_ = nullptr;
};

}  // namespace

struct machlim_config {
    machlim::RunConfig cfg;
};

extern "C" {

unsigned machlim_abi_version(void) { return 1; }

const char* machlim_status_name(machlim_status status) {
    switch (status) {
        case MACHLIM_OK: return "ok";
        case MACHLIM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case MACHLIM_ERR_CONFIG: return "config error";
        case MACHLIM_ERR_IO: return "io error";
        case MACHLIM_ERR_NUMERIC: return "numeric error";
        case MACHLIM_ERR_CONVERGENCE: return "convergence error";
        case MACHLIM_ERR_ASSERTION: return "assertion failed";
        case MACHLIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* machlim_last_error(void) { return g_last_error.c_str(); }

machlim_status machlim_config_parse_file(const char* path, machlim_config** out) {
    if (!path || !out) {
        set_error("null argument");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        auto* h = new machlim_config{machlim::parse_config_file(path)};
        *out = h;
        return MACHLIM_OK;
    });
}

machlim_status machlim_config_parse_string(const char* text, machlim_config** out) {
    if (!text || !out) {
        set_error("null argument");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        auto* h = new machlim_config{machlim::parse_config(text)};
        *out = h;
        return MACHLIM_OK;
    });
}

machlim_status machlim_config_set(machlim_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        set_error("null argument");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        // Round-trip through the canonical text with the key overridden; the
        // parser does all validation (including cross-field constraints).
        std::string text = machlim::serialize_config(cfg->cfg);
        text += std::string(key) + " = " + value + "\n";
        cfg->cfg = machlim::parse_config(text);
        return MACHLIM_OK;
    });
}

machlim_status machlim_config_get(const machlim_config* cfg, const char* key, char* buf,
                                  size_t buflen) {
    if (!cfg || !key || !buf) {
        set_error("null argument");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        const std::string text = machlim::serialize_config(cfg->cfg);
        const std::string needle = std::string(key) + " = ";
        std::size_t pos = text.find(needle);
        if (pos == std::string::npos ||
            (pos != 0 && text[pos - 1] != '\n')) {
            set_error(std::string("unknown key: ") + key);
            return MACHLIM_ERR_INVALID_ARGUMENT;
        }
        pos += needle.size();
        const std::size_t end = text.find('\n', pos);
        const std::string value = text.substr(pos, end - pos);
        if (value.size() + 1 > buflen) {
            set_error("buffer too small");
            return MACHLIM_ERR_INVALID_ARGUMENT;
        }
        std::memcpy(buf, value.c_str(), value.size() + 1);
        return MACHLIM_OK;
    });
}

machlim_status machlim_config_serialize(const machlim_config* cfg, char* buf, size_t buflen,
                                        size_t* needed) {
    if (!cfg) {
        set_error("null argument");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        const std::string text = machlim::serialize_config(cfg->cfg);
        if (needed) *needed = text.size() + 1;
        if (!buf) return MACHLIM_OK;
        if (text.size() + 1 > buflen) {
            set_error("buffer too small");
            return MACHLIM_ERR_INVALID_ARGUMENT;
        }
        std::memcpy(buf, text.c_str(), text.size() + 1);
        return MACHLIM_OK;
    });
}

void machlim_config_free(machlim_config* cfg) { delete cfg; }

machlim_status machlim_run_eps(const machlim_config* cfg) {
    if (!cfg) {
        set_error("null config");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        std::filesystem::create_directories(cfg->cfg.out_dir);
        machlim::EpsRunArgs args;
        args.config = cfg->cfg;
        args.diag_csv_path = cfg->cfg.out_dir + "/diag.csv";
        const machlim::EpsRunOutput out = machlim::run_eps(args);
        if (out.aborted) {
            set_error("run aborted: " + out.abort_reason);
            return MACHLIM_ERR_NUMERIC;
        }
        if (out.max_divh_res > 1e-10) {
            set_error("div H residual exceeded 1e-10: " +
                      machlim::format_double(out.max_divh_res));
            return MACHLIM_ERR_ASSERTION;
        }
        return MACHLIM_OK;
    });
}

machlim_status machlim_run_limit(const machlim_config* cfg, const char* checkpoint_path) {
    if (!cfg) {
        set_error("null config");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        std::filesystem::create_directories(cfg->cfg.out_dir);
        std::optional<machlim::LimitState> initial;
        if (checkpoint_path)
            initial = machlim::read_limit_checkpoint(checkpoint_path, cfg->cfg.grid_n);
        const machlim::LimitRunOutput out = machlim::run_limit(
            cfg->cfg, std::move(initial), cfg->cfg.out_dir + "/limit_diag.csv");
        if (out.aborted) {
            set_error("limit run aborted: " + out.abort_reason);
            return MACHLIM_ERR_NUMERIC;
        }
        const double tol = 1e-8;  // constraint invariant
        if (out.max_constraint_res > tol) {
            set_error("limit constraint residual exceeded 1e-8: " +
                      machlim::format_double(out.max_constraint_res));
            return MACHLIM_ERR_ASSERTION;
        }
        return MACHLIM_OK;
    });
}

machlim_status machlim_run_sweep(const machlim_config* cfg) {
    if (!cfg) {
        set_error("null config");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        machlim::SweepPlan plan{cfg->cfg};
        const machlim::SweepResult result = machlim::run_sweep(plan);
        if (!result.ok) {
            std::string msg = "sweep assertions failed:";
            for (const auto& a : result.assertions)
                if (!a.pass) msg += " " + a.name + " (" + a.detail + ");";
            set_error(msg);
            return MACHLIM_ERR_ASSERTION;
        }
        return MACHLIM_OK;
    });
}

machlim_status machlim_run_acoustic(const machlim_config* cfg, const char* csv_out) {
    if (!cfg) {
        set_error("null config");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        const machlim::RunConfig& c = cfg->cfg;
        machlim::AcousticOptions opt;
        opt.eps_list = c.acoustic_eps_list;
        opt.profile = c.acoustic_profile == "uniform"
                          ? machlim::AcousticOptions::Profile::uniform
                          : machlim::AcousticOptions::Profile::bump;
        opt.sponge_on = c.acoustic_sponge;
        opt.T = c.acoustic_T;
        opt.n = c.acoustic_n;
        opt.L = c.acoustic_L;
        opt.safety = c.acoustic_safety;
        opt.implicit = c.acoustic_implicit;
        opt.sponge_strength = c.sponge_strength;
        opt.probe_radius = c.probe_radius;
        const auto runs = machlim::run_acoustic_sweep(opt);

        CsvSink csv(csv_out);
        csv.line("eps,t,local_energy,total_energy");
        for (const auto& run : runs)
            for (const auto& s : run.series)
                csv.line(machlim::format_double(run.eps) + "," + machlim::format_double(s.t) +
                         "," + machlim::format_double(s.local_energy) + "," +
                         machlim::format_double(s.total_energy));

        if (opt.sponge_on && runs.size() >= 2) {
            for (std::size_t i = 0; i + 1 < runs.size(); ++i)
                if (!(runs[i].time_avg_local_energy > runs[i + 1].time_avg_local_energy)) {
                    set_error("time-averaged local energy not decreasing along eps list");
                    return MACHLIM_ERR_ASSERTION;
                }
        }
        return MACHLIM_OK;
    });
}

machlim_status machlim_run_identities(unsigned n, uint64_t seed, int rounds,
                                      const char* csv_out) {
    return guarded([&]() -> machlim_status {
        const machlim::Grid grid(static_cast<int>(n), 2.0 * M_PI);
        const auto cases = machlim::run_identity_suite(grid, seed, rounds);
        CsvSink csv(csv_out);
        csv.line("name,residual,input_norm,pass");
        bool all_pass = true;
        for (const auto& c : cases) {
            const bool pass = c.relative() <= 1e-10;
            all_pass = all_pass && pass;
            csv.line(std::string(machlim::to_string(c.name)) + "," +
                     machlim::format_double(c.residual_norm) + "," +
                     machlim::format_double(c.input_norm) + "," + (pass ? "pass" : "fail"));
        }
        if (!all_pass) {
            set_error("identity residual above 1e-10");
            return MACHLIM_ERR_ASSERTION;
        }
        return MACHLIM_OK;
    });
}

machlim_status machlim_fit_rates(const char* csv_in, const char* csv_out) {
    if (!csv_in) {
        set_error("null input path");
        return MACHLIM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> machlim_status {
        const auto fits =
            machlim::fit_rates_csv(csv_in, csv_out ? std::string(csv_out) : std::string());
        if (!csv_out) {
            CsvSink sink(nullptr);
            sink.line("quantity,alpha,r2");
            for (const auto& f : fits)
                sink.line(f.quantity + "," + machlim::format_double(f.alpha) + "," +
                          machlim::format_double(f.r2));
        }
        return MACHLIM_OK;
    });
}

}  // extern "C"
