#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpa/experiment.hpp"

namespace {

struct FlagSet {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_flags(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file");
    for (const char* key :
         {"dist", "K", "eps", "bidder", "seller", "T", "delta", "seed", "seeds", "out", "eta"}) {
        const std::string name = std::string("--") + key;
        cmd->add_option_function<std::string>(
            name,
            [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); },
            std::string("override config key ") + key);
    }
}

fpa::ExperimentConfig build_config(const FlagSet& flags) {
    fpa::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = fpa::parse_config_file(flags.config_path);
    for (const auto& [key, value] : flags.overrides) fpa::apply_flag(cfg, key, value);
    fpa::validate(cfg);
    return cfg;
}

std::vector<long> parse_horizons(const std::string& spec) {
    std::vector<long> out;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const auto comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? spec.npos : comma - pos);
        try {
            out.push_back(std::stol(tok));
        } catch (const std::exception&) {
            throw fpa::ConfigError("horizons: expected an integer, got '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-price auction no-regret bidding lab"};
    app.require_subcommand(1);

    FlagSet run_flags, sweep_flags;
    std::string horizons_spec, audit_dir;

    CLI::App* run = app.add_subcommand("run", "run one experiment (a batch of seeds)");
    add_common_flags(run, run_flags);

    CLI::App* sw = app.add_subcommand("sweep", "run a horizon sweep and fit the log-log slope");
    add_common_flags(sw, sweep_flags);
    sw->add_option("--horizons", horizons_spec, "comma-separated list of T values")->required();

    CLI::App* audit = app.add_subcommand("audit", "re-check invariants on an output directory");
    audit->add_option("dir", audit_dir, "experiment output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (run->parsed()) {
            const fpa::ExperimentResult res = fpa::run_experiment(build_config(run_flags));
            for (const fpa::SeedSummary& row : res.rows)
                std::printf("seed=%llu regret=%.6f lregret=%.6f rev_gap=%.6f benchmark=%.6f\n",
                            static_cast<unsigned long long>(row.seed), row.regret_ledger,
                            row.lregret, row.rev_gap, row.benchmark);
            return res.exit_code;
        }
        if (sw->parsed()) {
            const fpa::ScalingTable table =
                fpa::sweep(build_config(sweep_flags), parse_horizons(horizons_spec));
            for (const fpa::ScalingRow& row : table.rows)
                std::printf("T=%ld regret=%.6f lregret=%.6f rev_gap=%.6f\n", row.T,
                            row.regret_ledger, row.lregret, row.rev_gap);
            std::printf("slope=%.6f\n", table.slope);
            return table.exit_code;
        }
        if (audit->parsed()) {
            const int status = fpa::audit_directory(audit_dir);
            std::printf("audit: %s\n", status == 0 ? "clean" : "violations found");
            return status;
        }
    } catch (const fpa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
