#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qbc/config_file.hpp"
#include "qbc/scenario.hpp"

using namespace qbc;

namespace {

std::uint64_t summary_u64(const scenario_report& rep, const std::string& key) {
    for (const auto& [k, v] : rep.summary) {
        if (k == key) return std::get<std::uint64_t>(v);
    }
    FAIL("missing summary key " << key);
    return 0;
}

double summary_double(const scenario_report& rep, const std::string& key) {
    for (const auto& [k, v] : rep.summary) {
        if (k == key) return std::get<double>(v);
    }
    FAIL("missing summary key " << key);
    return 0;
}

std::string summary_string(const scenario_report& rep, const std::string& key) {
    for (const auto& [k, v] : rep.summary) {
        if (k == key) return std::get<std::string>(v);
    }
    FAIL("missing summary key " << key);
    return {};
}

}  // namespace

TEST_CASE("config validation reports the offending field") {
    scenario_config cfg;
    cfg.blocks = 0;
    CHECK_THROWS_WITH(run_scenario(cfg), Catch::Matchers::StartsWith("blocks:"));
    cfg.blocks = 11;
    CHECK_THROWS_AS(run_scenario(cfg), config_error);
    cfg.blocks = 3;

    cfg.trials = 0;
    CHECK_THROWS_WITH(run_scenario(cfg), Catch::Matchers::StartsWith("trials:"));
    cfg.trials = 5;

    cfg.scenario = scenario_kind::consensus;
    cfg.nodes = 1;
    CHECK_THROWS_WITH(run_scenario(cfg), Catch::Matchers::StartsWith("nodes:"));
    cfg.nodes = 4;

    cfg.dishonest.push_back({7, node_strategy::flip_report});
    CHECK_THROWS_WITH(run_scenario(cfg), Catch::Matchers::StartsWith("dishonest:"));
    cfg.dishonest.clear();

    cfg.attack.target = "sideways";
    CHECK_THROWS_WITH(run_scenario(cfg), Catch::Matchers::StartsWith("attack:"));
    cfg.attack.target = "live";

    cfg.scenario = scenario_kind::compare;
    cfg.attack.target = "3";
    CHECK_THROWS_AS(run_scenario(cfg), config_error);  // block index must be < blocks
}

TEST_CASE("string parsers cover the flag grammar") {
    CHECK(parse_scenario("compare") == scenario_kind::compare);
    CHECK_THROWS_AS(parse_scenario("quantum"), config_error);
    CHECK(parse_format("csv") == report_format::csv);
    CHECK_THROWS_AS(parse_format("xml"), config_error);

    const dishonest_entry d = parse_dishonest("2:random_report");
    CHECK(d.node == 2);
    CHECK(d.strategy == node_strategy::random_report);
    CHECK_THROWS_AS(parse_dishonest("nope"), config_error);
    CHECK_THROWS_AS(parse_dishonest("x:honest"), config_error);

    const attack_spec a = parse_attack("z_measure:5");
    CHECK(a.kind == attack_kind::z_measure);
    CHECK(a.target == "5");
    CHECK(parse_attack("phase_flip").target == "live");
    CHECK_THROWS_AS(parse_attack("warp:1"), config_error);
}

TEST_CASE("config files mirror the command line") {
    const std::string text = R"({
        "scenario": "consensus",
        "seed": 99,
        "blocks": 4,
        "nodes": 3,
        "dishonest": ["1:flip_report"],
        "trials": 50,
        "attack": "phase_flip:live",
        "out": "r.json",
        "format": "csv"
    })";
    const scenario_config cfg = parse_config_json(text);
    CHECK(cfg.scenario == scenario_kind::consensus);
    CHECK(cfg.seed == 99);
    CHECK(cfg.blocks == 4);
    CHECK(cfg.nodes == 3);
    REQUIRE(cfg.dishonest.size() == 1);
    CHECK(cfg.dishonest[0].node == 1);
    CHECK(cfg.trials == 50);
    CHECK(cfg.attack.kind == attack_kind::phase_flip);
    CHECK(cfg.output_path == "r.json");
    CHECK(cfg.format == report_format::csv);

    CHECK_THROWS_AS(parse_config_json("{\"speed\": 3}"), config_error);
    CHECK_THROWS_AS(parse_config_json("{\"seed\": \"fast\"}"), config_error);
    CHECK_THROWS_AS(parse_config_json("not json"), config_error);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.json"), config_error);
}

TEST_CASE("roundtrip scenario decodes every chain") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::roundtrip;
    cfg.blocks = 2;
    cfg.trials = 10;
    cfg.seed = 7;
    const scenario_report rep = run_scenario(cfg);
    CHECK(rep.ok);
    CHECK(rep.trials.size() == 10);
    CHECK(summary_double(rep, "pass_rate") == 1.0);
    CHECK(summary_u64(rep, "failures") == 0);
    for (const auto& t : rep.trials) CHECK(t.outcome == "pass");
}

TEST_CASE("tamper scenario separates denials from detections") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::tamper;
    cfg.blocks = 2;
    cfg.trials = 40;
    cfg.seed = 3;

    SECTION("live-photon bit flips are always detected") {
        cfg.attack = {attack_kind::bit_flip, "live"};
        const scenario_report rep = run_scenario(cfg);
        CHECK(summary_u64(rep, "denials") == 0);
        CHECK(summary_u64(rep, "detected") == 40);
        CHECK(summary_double(rep, "mass_on_original") == 0.0);
    }
    SECTION("attacks on the first photon are always denied") {
        cfg.attack = {attack_kind::bit_flip, "0"};
        const scenario_report rep = run_scenario(cfg);
        CHECK(summary_u64(rep, "denials") == 40);
        CHECK(summary_u64(rep, "detected") == 0);
        for (const auto& t : rep.trials) CHECK(t.outcome == "denied");
    }
    SECTION("a photon id that never existed is a config error") {
        cfg.attack = {attack_kind::bit_flip, "4000"};
        CHECK_THROWS_AS(run_scenario(cfg), config_error);
    }
}

TEST_CASE("consensus scenario reproduces the protocol rates") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::consensus;
    cfg.nodes = 3;
    cfg.trials = 400;
    cfg.seed = 11;
    CHECK(summary_double(run_scenario(cfg), "pass_rate") == 1.0);

    cfg.dishonest = {{0, node_strategy::flip_report}};
    CHECK(summary_double(run_scenario(cfg), "pass_rate") == 0.0);
}

TEST_CASE("network scenario keeps nodes consistent and logs episodes") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::network;
    cfg.nodes = 3;
    cfg.blocks = 2;
    cfg.trials = 4;
    cfg.seed = 13;
    const scenario_report rep = run_scenario(cfg);
    CHECK(rep.ok);
    CHECK(summary_double(rep, "accept_rate") == 1.0);
    CHECK(summary_u64(rep, "chains_consistent") == 1);
    const std::string events = summary_string(rep, "events");
    CHECK(events.find("proposal") != std::string::npos);
    CHECK(events.find("appended") != std::string::npos);

    const scenario_report again = run_scenario(cfg);
    CHECK(summary_string(again, "events") == events);
}

TEST_CASE("compare scenario contrasts prefix survival with total loss") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::compare;
    cfg.blocks = 5;
    cfg.trials = 60;
    cfg.seed = 17;
    cfg.attack = {attack_kind::bit_flip, "2"};
    const scenario_report rep = run_scenario(cfg);
    CHECK(rep.ok);
    CHECK(summary_string(rep, "classical_first_invalid") == "3");
    CHECK(summary_u64(rep, "classical_prefix_intact") == 1);
    CHECK(summary_double(rep, "quantum_mass_on_original") == 0.0);

    cfg.attack.target = "4";  // final block: invisible to link checks
    const scenario_report tail = run_scenario(cfg);
    CHECK(tail.ok);
    CHECK(summary_string(tail, "classical_first_invalid") == "none");
}

TEST_CASE("reports regenerate byte for byte") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::compare;
    cfg.blocks = 4;
    cfg.trials = 25;
    cfg.seed = 23;
    cfg.attack = {attack_kind::bit_flip, "1"};

    const scenario_report a = run_scenario(cfg);
    const scenario_report b = run_scenario(cfg);
    CHECK(render_report(a, report_format::json) == render_report(b, report_format::json));
    CHECK(render_report(a, report_format::csv) == render_report(b, report_format::csv));
}

TEST_CASE("json reports carry exactly the three top-level keys") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::roundtrip;
    cfg.blocks = 1;
    cfg.trials = 3;
    const scenario_report rep = run_scenario(cfg);
    const std::string text = render_report(rep, report_format::json);

    const auto doc = nlohmann::json::parse(text);
    REQUIRE(doc.is_object());
    CHECK(doc.size() == 3);
    CHECK(doc.contains("config"));
    CHECK(doc.contains("trials"));
    CHECK(doc.contains("summary"));
    CHECK(doc["trials"].size() == 3);
    CHECK(doc["trials"][0].contains("trial"));
    CHECK(doc["trials"][0].contains("outcome"));
    CHECK(doc["trials"][0].contains("detail"));
    CHECK(doc["config"]["seed"] == 0);
}

TEST_CASE("csv reports have a header and a summary footer") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::roundtrip;
    cfg.blocks = 1;
    cfg.trials = 2;
    const std::string text = render_report(run_scenario(cfg), report_format::csv);
    CHECK(text.rfind("trial,outcome,detail\n", 0) == 0);
    CHECK(text.find("# summary\n") != std::string::npos);
    CHECK(text.find("# pass_rate=") != std::string::npos);
}

TEST_CASE("emit_report writes the rendered bytes") {
    scenario_config cfg;
    cfg.scenario = scenario_kind::roundtrip;
    cfg.blocks = 1;
    cfg.trials = 2;
    const scenario_report rep = run_scenario(cfg);

    const auto path = std::filesystem::temp_directory_path() / "qbc_report_test.json";
    emit_report(rep, report_format::json, path);
    std::ifstream in(path, std::ios::binary);
    std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == render_report(rep, report_format::json));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(emit_report(rep, report_format::json, "/nonexistent/dir/report.json"),
                    write_error);
}

TEST_CASE("double formatting is fixed at seventeen significant digits") {
    CHECK(detail::format_double(0.5) == "0.5");
    CHECK(detail::format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(detail::format_double(1.0) == "1");
}
