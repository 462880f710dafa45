#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "daynight/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSimAbort = 2;
constexpr int kExitPartialBatch = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic day/night trajectory-tracking simulator and pose matcher"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> delta_override;
    bool unique_mode = false;
    int verbosity = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
        cmd->add_option("--seed", seed_override, "override the config seed");
        cmd->add_option("--delta", delta_override,
                        "override the pose-matching threshold in meters");
        cmd->add_flag("--unique", unique_mode, "resolve night-frame reuse by smallest error");
        cmd->add_flag("-v,--verbose", verbosity, "verbose stage logging");
    };

    std::string run_config;
    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario end to end");
    run_cmd->add_option("config", run_config, "scenario config file")->required();
    add_common(run_cmd);

    std::string batch_dir;
    CLI::App* batch_cmd = app.add_subcommand("batch", "run every scenario in a directory");
    batch_cmd->add_option("dir", batch_dir, "directory of scenario configs")->required();
    add_common(batch_cmd);

    std::string manifest_path;
    CLI::App* report_cmd =
        app.add_subcommand("report", "re-derive the alignment report from a pair manifest");
    report_cmd->add_option("manifest", manifest_path, "pair manifest file")->required();

    std::string validate_config;
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario config");
    validate_cmd->add_option("config", validate_config, "scenario config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    daynight::pipe::PipelineOptions options;
    options.out_dir = out_dir;
    options.seed_override = seed_override;
    options.delta_override = delta_override;
    if (unique_mode) options.unique_override = true;
    options.verbosity = verbosity;

    try {
        if (run_cmd->parsed()) {
            const auto cfg = daynight::pipe::load_scenario(run_config);
            const auto artifacts = daynight::pipe::run_scenario(cfg, options);
            std::printf("%s", daynight::match::render_report_text(artifacts.report).c_str());
            std::printf("manifest: %s\n", artifacts.manifest_path.c_str());
            return kExitOk;
        }
        if (batch_cmd->parsed()) {
            const auto summary = daynight::pipe::batch_run(batch_dir, options);
            std::printf("%s", daynight::pipe::render_batch_table(summary).c_str());
            return summary.all_ok ? kExitOk : kExitPartialBatch;
        }
        if (report_cmd->parsed()) {
            const auto report = daynight::pipe::report_from_manifest(manifest_path);
            std::printf("%s", daynight::match::render_report_text(report).c_str());
            return kExitOk;
        }
        if (validate_cmd->parsed()) {
            const auto cfg = daynight::pipe::load_scenario(validate_config);
            std::printf("ok: %s (seed %llu, hash %s)\n", cfg.scenario_id.c_str(),
                        static_cast<unsigned long long>(cfg.seed), cfg.config_hash.c_str());
            return kExitOk;
        }
    } catch (const daynight::pipe::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const daynight::pipe::SimulationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSimAbort;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSimAbort;
    }
    return kExitUsage;
}
