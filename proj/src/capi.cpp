#include "fvporous/fvporous.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <stdexcept>
#include <string>

#include "fvporous/analysis.hpp"
#include "fvporous/commands.hpp"
#include "fvporous/config.hpp"
#include "fvporous/errors.hpp"

struct fvp_config {
    fvporous::RunConfig run;
};

struct fvp_trajectory {
    fvporous::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

fvp_status fail(fvp_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

/// Maps exceptions escaping the C++ core onto status codes.
template <class Body>
fvp_status guarded(Body&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const fvporous::ConfigError& e) {
        return fail(FVP_ERR_CONFIG, e.what());
    } catch (const fvporous::NumericalError& e) {
        return fail(FVP_ERR_NUMERICAL, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(FVP_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(FVP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(FVP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(FVP_ERR_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FVP_ERR_INTERNAL, "out of memory");
    } catch (const std::runtime_error& e) {
        return fail(FVP_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(FVP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FVP_ERR_INTERNAL, "unknown exception");
    }
}

fvporous::CommandOptions to_options(const fvp_command_options* in) {
    fvporous::CommandOptions out;
    if (in == nullptr) return out;
    if (in->ns != nullptr) out.ns.assign(in->ns, in->ns + in->ns_len);
    if (in->ref_n != 0) out.ref_n = in->ref_n;
    if (in->samples >= 0) out.samples = static_cast<std::size_t>(in->samples);
    if (in->has_seed) out.seed = in->seed;
    if (in->out_dir != nullptr) out.out = in->out_dir;
    return out;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

using Command = fvporous::CommandResult (*)(const fvporous::RunConfig&, const fvporous::CommandOptions&);

fvp_status run_command(Command command, const fvp_config* config, const fvp_command_options* options,
                       char** summary_json) {
    if (summary_json != nullptr) *summary_json = nullptr;
    return guarded([&] {
        if (config == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "config is NULL");
        const fvporous::CommandResult result = command(config->run, to_options(options));
        if (summary_json != nullptr) *summary_json = copy_string(result.summary.dump(2));
        if (!result.passed) return fail(FVP_ERR_CHECK_FAILED, "acceptance predicate failed; see summary.json");
        return FVP_OK;
    });
}

fvp_status check_checkpoint(const fvp_trajectory* traj, size_t k) {
    if (traj == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "trajectory is NULL");
    if (k >= traj->traj.times.size()) {
        return fail(FVP_ERR_INVALID_ARGUMENT, "checkpoint index " + std::to_string(k) + " out of range");
    }
    return FVP_OK;
}

}  // namespace

extern "C" {

const char* fvp_version(void) { return "1.0.0"; }

const char* fvp_last_error(void) { return g_last_error.c_str(); }

const char* fvp_status_string(fvp_status status) {
    switch (status) {
    case FVP_OK: return "ok";
    case FVP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FVP_ERR_CONFIG: return "configuration error";
    case FVP_ERR_NUMERICAL: return "numerical failure";
    case FVP_ERR_IO: return "i/o error";
    case FVP_ERR_CHECK_FAILED: return "check failed";
    case FVP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

fvp_status fvp_config_load(const char* path, fvp_config** out) {
    if (out != nullptr) *out = nullptr;
    return guarded([&] {
        if (path == nullptr || out == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        *out = new fvp_config{fvporous::load_run_config(path)};
        return FVP_OK;
    });
}

fvp_status fvp_config_parse(const char* text, fvp_config** out) {
    if (out != nullptr) *out = nullptr;
    return guarded([&] {
        if (text == nullptr || out == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        *out = new fvp_config{fvporous::parse_run_config(text)};
        return FVP_OK;
    });
}

void fvp_config_destroy(fvp_config* config) { delete config; }

fvp_status fvp_config_horizon(const fvp_config* config, double* T) {
    if (config == nullptr || T == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
    *T = config->run.problem->T;
    return FVP_OK;
}

fvp_status fvp_config_cells(const fvp_config* config, size_t* n) {
    if (config == nullptr || n == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
    *n = config->run.n;
    return FVP_OK;
}

fvp_status fvp_solve(const fvp_config* config, size_t n, fvp_trajectory** out) {
    if (out != nullptr) *out = nullptr;
    return guarded([&] {
        if (config == nullptr || out == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        const std::size_t cells = n == 0 ? config->run.n : n;
        const fvporous::Grid grid(cells);
        const fvporous::StepControl control =
            fvporous::control_for(config->run, cells, fvporous::StepRule::dx_over_4);
        *out = new fvp_trajectory{fvporous::integrate(
            config->run.problem, grid, control,
            fvporous::uniform_checkpoints(config->run.problem->T, config->run.checkpoints))};
        return FVP_OK;
    });
}

void fvp_trajectory_destroy(fvp_trajectory* traj) { delete traj; }

size_t fvp_trajectory_cells(const fvp_trajectory* traj) { return traj == nullptr ? 0 : traj->traj.grid.size(); }

size_t fvp_trajectory_checkpoints(const fvp_trajectory* traj) {
    return traj == nullptr ? 0 : traj->traj.times.size();
}

fvp_status fvp_trajectory_time(const fvp_trajectory* traj, size_t k, double* t) {
    if (const fvp_status s = check_checkpoint(traj, k); s != FVP_OK) return s;
    if (t == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
    *t = traj->traj.times[k];
    return FVP_OK;
}

fvp_status fvp_trajectory_state(const fvp_trajectory* traj, size_t k, double* values, size_t len) {
    if (const fvp_status s = check_checkpoint(traj, k); s != FVP_OK) return s;
    if (values == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
    const fvporous::CellField& v = traj->traj.states[k];
    if (len != v.size()) {
        return fail(FVP_ERR_INVALID_ARGUMENT,
                    "buffer holds " + std::to_string(len) + " values, state has " + std::to_string(v.size()));
    }
    std::copy(v.values().begin(), v.values().end(), values);
    return FVP_OK;
}

fvp_status fvp_trajectory_mass(const fvp_trajectory* traj, size_t k, double* mass) {
    if (const fvp_status s = check_checkpoint(traj, k); s != FVP_OK) return s;
    if (mass == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
    *mass = fvporous::mass(traj->traj.states[k], *traj->traj.problem);
    return FVP_OK;
}

fvp_status fvp_trajectory_monitors(const fvp_trajectory* traj, double out[6]) {
    return guarded([&] {
        if (traj == nullptr || out == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        const auto values = fvporous::monitors(traj->traj).values();
        std::copy(values.begin(), values.end(), out);
        return FVP_OK;
    });
}

fvp_status fvp_trajectory_weak_residual(const fvp_trajectory* traj, int mode, double* residual) {
    return guarded([&] {
        if (traj == nullptr || residual == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        *residual = fvporous::weak_residual(traj->traj, mode);
        return FVP_OK;
    });
}

fvp_status fvp_error_pair(const fvp_trajectory* coarse, const fvp_trajectory* reference, double* e_sup_sq,
                          double* e_flux, double* s) {
    return guarded([&] {
        if (coarse == nullptr || reference == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        const fvporous::ErrorRow row = fvporous::error_pair(coarse->traj, reference->traj);
        if (e_sup_sq != nullptr) *e_sup_sq = row.E_sup_sq;
        if (e_flux != nullptr) *e_flux = row.E_flux;
        if (s != nullptr) *s = row.S;
        return FVP_OK;
    });
}

fvp_status fvp_check_gn_discrete(const double* w_nodes, const double* s_cells, size_t n, double* ratio) {
    return guarded([&] {
        if (w_nodes == nullptr || s_cells == nullptr || ratio == nullptr) {
            return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        }
        const fvporous::Grid grid(n);
        *ratio = fvporous::check_gn_discrete({w_nodes, n + 1}, {s_cells, n}, grid).ratio;
        return FVP_OK;
    });
}

fvp_status fvp_check_gn_continuous(const double* u_nodes, size_t n, double* ratio) {
    return guarded([&] {
        if (u_nodes == nullptr || ratio == nullptr) return fail(FVP_ERR_INVALID_ARGUMENT, "NULL argument");
        const fvporous::Grid grid(n);
        *ratio = fvporous::check_gn_continuous({u_nodes, n + 1}, grid).ratio;
        return FVP_OK;
    });
}

void fvp_command_options_init(fvp_command_options* options) {
    if (options == nullptr) return;
    *options = fvp_command_options{nullptr, 0, 0, -1, 0, 0, nullptr};
}

fvp_status fvp_cmd_solve(const fvp_config* config, const fvp_command_options* options, char** summary_json) {
    return run_command(&fvporous::cmd_solve, config, options, summary_json);
}

fvp_status fvp_cmd_converge(const fvp_config* config, const fvp_command_options* options, char** summary_json) {
    return run_command(&fvporous::cmd_converge, config, options, summary_json);
}

fvp_status fvp_cmd_inequalities(const fvp_config* config, const fvp_command_options* options,
                                char** summary_json) {
    return run_command(&fvporous::cmd_inequalities, config, options, summary_json);
}

fvp_status fvp_cmd_monitors(const fvp_config* config, const fvp_command_options* options, char** summary_json) {
    return run_command(&fvporous::cmd_monitors, config, options, summary_json);
}

void fvp_string_free(char* s) { std::free(s); }

}  // extern "C"
