// fvporous command-line driver. Everything goes through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "fvporous/fvporous.h"

namespace {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitNumerical = 4,
    kExitIo = 5,
    kExitInternal = 6,
};

int exit_code_for(fvp_status status) {
    switch (status) {
    case FVP_OK: return kExitOk;
    case FVP_ERR_CHECK_FAILED: return kExitCheckFailed;
    case FVP_ERR_INVALID_ARGUMENT: return kExitUsage;
    case FVP_ERR_CONFIG: return kExitConfig;
    case FVP_ERR_NUMERICAL: return kExitNumerical;
    case FVP_ERR_IO: return kExitIo;
    case FVP_ERR_INTERNAL: return kExitInternal;
    }
    return kExitInternal;
}

struct Args {
    std::string config;
    std::vector<std::size_t> ns;
    std::size_t ref_n = 0;
    std::int64_t samples = -1;
    std::uint64_t seed = 0;
    std::string out;
    bool quiet = false;
};

using CommandFn = fvp_status (*)(const fvp_config*, const fvp_command_options*, char**);

int run(const char* name, CommandFn command, const Args& args, bool seed_given) {
    fvp_config* config = nullptr;
    fvp_status status = fvp_config_load(args.config.c_str(), &config);
    if (status != FVP_OK) {
        std::fprintf(stderr, "fvporous %s: %s: %s\n", name, fvp_status_string(status), fvp_last_error());
        return exit_code_for(status);
    }

    fvp_command_options options;
    fvp_command_options_init(&options);
    options.ns = args.ns.empty() ? nullptr : args.ns.data();
    options.ns_len = args.ns.size();
    options.ref_n = args.ref_n;
    options.samples = args.samples;
    options.seed = args.seed;
    options.has_seed = seed_given ? 1 : 0;
    options.out_dir = args.out.empty() ? nullptr : args.out.c_str();

    char* summary = nullptr;
    status = command(config, &options, &summary);
    if (summary != nullptr && !args.quiet) std::printf("%s\n", summary);
    fvp_string_free(summary);
    fvp_config_destroy(config);

    if (status != FVP_OK) {
        std::fprintf(stderr, "fvporous %s: %s: %s\n", name, fvp_status_string(status), fvp_last_error());
    }
    return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite volume solver for a degenerate parabolic model with experiment drivers"};
    app.set_version_flag("--version", std::string(fvp_version()));
    app.require_subcommand(1);

    Args args;
    struct Sub {
        const char* name;
        const char* help;
        CommandFn fn;
        CLI::App* app = nullptr;
        CLI::Option* seed = nullptr;
    };
    Sub subs[] = {
        {"solve", "Integrate one run and write solution.csv", &fvp_cmd_solve},
        {"converge", "Mesh convergence study against a fine reference", &fvp_cmd_converge},
        {"inequalities", "Randomized Gagliardo-Nirenberg ratio sweep", &fvp_cmd_inequalities},
        {"monitors", "Bound monitors across resolutions", &fvp_cmd_monitors},
    };
    for (Sub& s : subs) {
        s.app = app.add_subcommand(s.name, s.help);
        s.app->add_option("--config", args.config, "Run configuration file")->required()->check(CLI::ExistingFile);
        s.app->add_option("--out", args.out, "Output directory (overrides the config's out)");
        s.app->add_flag("-q,--quiet", args.quiet, "Do not print the summary");
        if (s.fn != &fvp_cmd_solve) {
            s.app->add_option("--ns", args.ns, "Resolutions, e.g. --ns 16,32,64")
                ->delimiter(',')
                ->check(CLI::PositiveNumber);
        }
        if (s.fn == &fvp_cmd_converge) {
            s.app->add_option("--ref-n", args.ref_n, "Reference resolution")->check(CLI::PositiveNumber);
        }
        if (s.fn == &fvp_cmd_inequalities) {
            s.app->add_option("--samples", args.samples, "Samples per resolution")->check(CLI::NonNegativeNumber);
            s.seed = s.app->add_option("--seed", args.seed, "Sampling seed (overrides the config's seed)");
        }
    }

    CLI11_PARSE(app, argc, argv);

    for (const Sub& s : subs) {
        if (s.app->parsed()) return run(s.name, s.fn, args, s.seed != nullptr && s.seed->count() > 0);
    }
    return kExitUsage;
}
