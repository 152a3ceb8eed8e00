// Scenario runner: configures, seeds, and executes the simulations, and
// writes byte-stable reports for analysis and golden-file comparison.
//
// Exit codes: 0 success, 1 scenario assertion failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbc/config_file.hpp"
#include "qbc/scenario.hpp"

namespace {

void print_summary(const qbc::scenario_report& rep) {
    std::printf("scenario=%s seed=%llu trials=%zu runtime=%.3fs\n",
                qbc::to_string(rep.config.scenario),
                static_cast<unsigned long long>(rep.config.seed), rep.trials.size(),
                rep.runtime_seconds);
    for (const auto& [key, value] : rep.summary) {
        if (key == "events") continue;  // full log goes to the report file
        std::string rendered;
        qbc::detail::append_summary_value(rendered, value);
        std::printf("  %s = %s\n", key.c_str(), rendered.c_str());
    }
    std::printf("  ok = %s\n", rep.ok ? "true" : "false");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal quantum blockchain simulator"};

    std::string scenario, attack, out_path, format, config_path;
    std::uint64_t seed = 0;
    int blocks = 0, nodes = 0, trials = 0;
    std::vector<std::string> dishonest;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    auto* opt_scenario =
        app.add_option("--scenario", scenario, "roundtrip|tamper|consensus|network|compare");
    auto* opt_seed = app.add_option("--seed", seed, "master seed");
    auto* opt_blocks = app.add_option("--blocks", blocks, "chain length in blocks (max 10)");
    auto* opt_nodes = app.add_option("--nodes", nodes, "network/consensus party count");
    auto* opt_dishonest = app.add_option("--dishonest", dishonest,
                                         "index:strategy, repeatable "
                                         "(flip_report|random_report|honest)");
    auto* opt_trials = app.add_option("--trials", trials, "trials or episodes per run");
    auto* opt_attack =
        app.add_option("--attack", attack,
                       "kind:target, kind in bit_flip|phase_flip|random_unitary|z_measure; "
                       "target is a photon id or 'live' (compare: block index)");
    auto* opt_out = app.add_option("--out", out_path, "report file path");
    auto* opt_format = app.add_option("--format", format, "json|csv");

    CLI11_PARSE(app, argc, argv);

    try {
        qbc::scenario_config cfg;
        if (!config_path.empty()) {
            cfg = qbc::load_config_file(config_path);
        }
        if (opt_scenario->count()) cfg.scenario = qbc::parse_scenario(scenario);
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_blocks->count()) cfg.blocks = blocks;
        if (opt_nodes->count()) cfg.nodes = nodes;
        if (opt_dishonest->count()) {
            cfg.dishonest.clear();
            for (const auto& d : dishonest) cfg.dishonest.push_back(qbc::parse_dishonest(d));
        }
        if (opt_trials->count()) cfg.trials = trials;
        if (opt_attack->count()) cfg.attack = qbc::parse_attack(attack);
        if (opt_out->count()) cfg.output_path = out_path;
        if (opt_format->count()) cfg.format = qbc::parse_format(format);

        const qbc::scenario_report rep = qbc::run_scenario(cfg);
        print_summary(rep);
        if (!cfg.output_path.empty()) {
            qbc::emit_report(rep, cfg.format, cfg.output_path);
            std::printf("report written to %s\n", cfg.output_path.c_str());
        }
        return rep.ok ? 0 : 1;
    } catch (const qbc::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const qbc::write_error& e) {
        std::fprintf(stderr, "write error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
