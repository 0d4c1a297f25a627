// Batch front end for the two-double-slit pair simulator.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twinslit/config.hpp"
#include "twinslit/errors.hpp"
#include "twinslit/pipeline.hpp"
#include "twinslit/validation.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "Config file (key = value format)");
    cmd->add_option("--seed", f.seed, "Override sampler.seed");
    cmd->add_option("--out", f.out_dir, "Override run.out output directory");
    cmd->add_option("--workers", f.workers, "Override run.workers");
}

twinslit::RunConfig resolve(const CommonFlags& f) {
    twinslit::RunConfig cfg;
    if (!f.config_path.empty()) cfg = twinslit::load_config(f.config_path);
    if (f.seed >= 0) cfg.sampler.seed = static_cast<std::uint64_t>(f.seed);
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (f.workers > 0) cfg.workers = f.workers;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled-pair two-double-slit simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string which;
    for (const char* name : {"trajectory", "ensemble", "sqm-joint", "selective", "compare",
                             "validate"}) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common(cmd, flags);
        cmd->callback([&which, name] { which = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        twinslit::RunConfig cfg = resolve(flags);
        if (which == "trajectory") {
            twinslit::run_trajectory(cfg);
        } else if (which == "ensemble") {
            twinslit::run_ensemble(cfg);
        } else if (which == "sqm-joint") {
            twinslit::run_sqm_joint(cfg);
        } else if (which == "selective") {
            twinslit::run_selective(cfg);
        } else if (which == "compare") {
            twinslit::run_compare(cfg);
        } else if (which == "validate") {
            twinslit::ValidationReport rep = twinslit::run_validation(cfg.params);
            for (const auto& line : rep.lines) std::cout << line << '\n';
            if (rep.failed > 0) {
                std::cerr << rep.failed << " validation check(s) failed\n";
                return 1;
            }
        }
    } catch (const twinslit::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
