#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scenario.hpp"

namespace qbc {

// Loads a scenario configuration from JSON text. Keys mirror the command
// line: scenario, seed, blocks, nodes, dishonest (array of
// "index:strategy"), trials, attack ("kind:target"), out, format.
inline scenario_config parse_config_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw config_error("config: top level must be an object");
    }
    scenario_config cfg;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "scenario") {
                cfg.scenario = parse_scenario(value.get<std::string>());
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "blocks") {
                cfg.blocks = value.get<int>();
            } else if (key == "nodes") {
                cfg.nodes = value.get<int>();
            } else if (key == "trials") {
                cfg.trials = value.get<int>();
            } else if (key == "dishonest") {
                for (const auto& item : value) {
                    cfg.dishonest.push_back(parse_dishonest(item.get<std::string>()));
                }
            } else if (key == "attack") {
                cfg.attack = parse_attack(value.get<std::string>());
            } else if (key == "out" || key == "output_path") {
                cfg.output_path = value.get<std::string>();
            } else if (key == "format") {
                cfg.format = parse_format(value.get<std::string>());
            } else {
                throw config_error("config: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception&) {
            throw config_error("config: wrong type for key '" + key + "'");
        }
    }
    return cfg;
}

inline scenario_config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

}  // namespace qbc
