#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "classical.hpp"
#include "network.hpp"

namespace qbc {

enum class scenario_kind { roundtrip, tamper, consensus, network, compare };
enum class report_format { json, csv };

struct dishonest_entry {
    int node = 0;
    node_strategy strategy = node_strategy::flip_report;
};

// Attack selector. `target` is a photon id, or "live" for the one photon
// that is still in flight; the compare scenario reads it as the classical
// block index instead.
struct attack_spec {
    attack_kind kind = attack_kind::bit_flip;
    std::string target = "live";
};

struct scenario_config {
    scenario_kind scenario = scenario_kind::roundtrip;
    std::uint64_t seed = 0;
    int blocks = 3;
    int nodes = 4;
    std::vector<dishonest_entry> dishonest;
    int trials = 100;
    attack_spec attack;
    std::string output_path;
    report_format format = report_format::json;
};

struct trial_record {
    std::uint64_t trial = 0;
    std::string outcome;
    std::string detail;
};

using histogram = std::vector<std::pair<std::string, std::uint64_t>>;
using summary_value = std::variant<std::uint64_t, double, std::string, histogram>;

struct scenario_report {
    scenario_config config;
    std::vector<trial_record> trials;
    std::vector<std::pair<std::string, summary_value>> summary;
    bool ok = true;              // scenario-level assertions held
    double runtime_seconds = 0;  // console information only, never serialized
};

// ---- enum names -----------------------------------------------------------

inline const char* to_string(scenario_kind k) {
    switch (k) {
        case scenario_kind::roundtrip: return "roundtrip";
        case scenario_kind::tamper: return "tamper";
        case scenario_kind::consensus: return "consensus";
        case scenario_kind::network: return "network";
        case scenario_kind::compare: return "compare";
    }
    return "?";
}

inline const char* to_string(report_format f) {
    return f == report_format::json ? "json" : "csv";
}

inline const char* to_string(node_strategy s) {
    switch (s) {
        case node_strategy::honest: return "honest";
        case node_strategy::flip_report: return "flip_report";
        case node_strategy::random_report: return "random_report";
    }
    return "?";
}

inline const char* to_string(attack_kind k) {
    switch (k) {
        case attack_kind::bit_flip: return "bit_flip";
        case attack_kind::phase_flip: return "phase_flip";
        case attack_kind::random_unitary: return "random_unitary";
        case attack_kind::z_measure: return "z_measure";
    }
    return "?";
}

inline scenario_kind parse_scenario(std::string_view s) {
    if (s == "roundtrip") return scenario_kind::roundtrip;
    if (s == "tamper") return scenario_kind::tamper;
    if (s == "consensus") return scenario_kind::consensus;
    if (s == "network") return scenario_kind::network;
    if (s == "compare") return scenario_kind::compare;
    throw config_error("scenario: unknown scenario '" + std::string(s) + "'");
}

inline report_format parse_format(std::string_view s) {
    if (s == "json") return report_format::json;
    if (s == "csv") return report_format::csv;
    throw config_error("format: expected json or csv, got '" + std::string(s) + "'");
}

inline node_strategy parse_strategy(std::string_view s) {
    if (s == "honest") return node_strategy::honest;
    if (s == "flip_report") return node_strategy::flip_report;
    if (s == "random_report") return node_strategy::random_report;
    throw config_error("dishonest: unknown strategy '" + std::string(s) + "'");
}

inline attack_kind parse_attack_kind(std::string_view s) {
    if (s == "bit_flip") return attack_kind::bit_flip;
    if (s == "phase_flip") return attack_kind::phase_flip;
    if (s == "random_unitary") return attack_kind::random_unitary;
    if (s == "z_measure") return attack_kind::z_measure;
    throw config_error("attack: unknown attack kind '" + std::string(s) + "'");
}

// "index:strategy", e.g. "1:flip_report"
inline dishonest_entry parse_dishonest(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) {
        throw config_error("dishonest: expected index:strategy, got '" + std::string(s) + "'");
    }
    dishonest_entry e;
    try {
        e.node = std::stoi(std::string(s.substr(0, colon)));
    } catch (const std::exception&) {
        throw config_error("dishonest: bad node index in '" + std::string(s) + "'");
    }
    e.strategy = parse_strategy(s.substr(colon + 1));
    return e;
}

// "kind:target", e.g. "bit_flip:live" or "z_measure:3"
inline attack_spec parse_attack(std::string_view s) {
    const auto colon = s.find(':');
    attack_spec a;
    if (colon == std::string_view::npos) {
        a.kind = parse_attack_kind(s);
        return a;
    }
    a.kind = parse_attack_kind(s.substr(0, colon));
    a.target = std::string(s.substr(colon + 1));
    return a;
}

// ---- config validation ----------------------------------------------------

namespace detail {

inline std::uint64_t parse_target_id(const std::string& target, const char* field) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(target, &used);
        if (used != target.size()) throw std::invalid_argument(target);
        return v;
    } catch (const std::exception&) {
        throw config_error(std::string(field) + ": target must be 'live' or an integer, got '" +
                           target + "'");
    }
}

}  // namespace detail

inline void validate_config(const scenario_config& cfg) {
    if (cfg.blocks < 1 || cfg.blocks > 10) {
        throw config_error("blocks: must lie in [1, 10], got " + std::to_string(cfg.blocks));
    }
    if (cfg.trials < 1) {
        throw config_error("trials: must be at least 1, got " + std::to_string(cfg.trials));
    }
    const bool needs_parties = cfg.scenario == scenario_kind::consensus ||
                               cfg.scenario == scenario_kind::network;
    if (cfg.nodes < 1 || (needs_parties && cfg.nodes < 2)) {
        throw config_error("nodes: scenario needs at least " +
                           std::string(needs_parties ? "2" : "1") + " nodes, got " +
                           std::to_string(cfg.nodes));
    }
    for (const auto& d : cfg.dishonest) {
        if (d.node < 0 || d.node >= cfg.nodes) {
            throw config_error("dishonest: node index " + std::to_string(d.node) +
                               " is outside [0, " + std::to_string(cfg.nodes) + ")");
        }
    }
    if (cfg.attack.target != "live") {
        const std::uint64_t id = detail::parse_target_id(cfg.attack.target, "attack");
        if (cfg.scenario == scenario_kind::compare &&
            id >= static_cast<std::uint64_t>(cfg.blocks)) {
            throw config_error("attack: compare tampers a block index, which must be < blocks");
        }
    }
}

// ---- scenarios ------------------------------------------------------------

namespace detail {

inline std::string random_bits(int count, random_source& rng) {
    std::string bits(static_cast<std::size_t>(count), '0');
    for (auto& c : bits) c = rng.next_bit() ? '1' : '0';
    return bits;
}

inline quantum_chain build_from_bits(const std::string& bits, random_source& rng) {
    quantum_chain chain;
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        chain.extend(bits.substr(i, 2), rng);
    }
    return chain;
}

inline histogram sorted_histogram(const std::map<std::string, std::uint64_t>& counts) {
    return histogram(counts.begin(), counts.end());
}

inline std::vector<node_strategy> strategies_for(const scenario_config& cfg) {
    std::vector<node_strategy> strategies(static_cast<std::size_t>(cfg.nodes),
                                          node_strategy::honest);
    for (const auto& d : cfg.dishonest) {
        strategies[static_cast<std::size_t>(d.node)] = d.strategy;
    }
    return strategies;
}

inline scenario_report run_roundtrip(const scenario_config& cfg) {
    scenario_report rep;
    const random_source master(cfg.seed);
    std::uint64_t failures = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        random_source rng = master.split(static_cast<std::uint64_t>(t));
        const std::string bits = random_bits(2 * cfg.blocks, rng);
        const quantum_chain chain = build_from_bits(bits, rng);
        const std::string decoded = chain.decode(rng);
        const bool pass = decoded == bits;
        if (!pass) ++failures;
        rep.trials.push_back({static_cast<std::uint64_t>(t), pass ? "pass" : "fail",
                              "encoded=" + bits + " decoded=" + decoded});
    }
    rep.summary.emplace_back("pass_rate",
                             1.0 - static_cast<double>(failures) / cfg.trials);
    rep.summary.emplace_back("failures", failures);
    rep.ok = failures == 0;
    return rep;
}

inline scenario_report run_tamper(const scenario_config& cfg) {
    scenario_report rep;
    random_source master(cfg.seed);
    const std::string bits = random_bits(2 * cfg.blocks, master);
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t denials = 0, detected = 0, missed = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        random_source rng = master.split(static_cast<std::uint64_t>(t));
        quantum_chain chain = build_from_bits(bits, rng);
        const std::uint64_t target = cfg.attack.target == "live"
                                         ? chain.live_photon()
                                         : parse_target_id(cfg.attack.target, "attack");
        try {
            chain.tamper({cfg.attack.kind, target}, rng);
        } catch (const temporal_access_error&) {
            ++denials;
            rep.trials.push_back({static_cast<std::uint64_t>(t), "denied",
                                  "photon=" + std::to_string(target)});
            continue;
        } catch (const unknown_photon&) {
            throw config_error("attack: photon " + std::to_string(target) + " does not exist");
        }
        const std::string decoded = chain.decode(rng);
        ++counts[decoded];
        const bool hit = decoded != bits;
        if (hit) ++detected; else ++missed;
        rep.trials.push_back({static_cast<std::uint64_t>(t), hit ? "detected" : "missed",
                              "decoded=" + decoded});
    }
    const std::uint64_t applied = detected + missed;
    rep.summary.emplace_back("encoded", bits);
    rep.summary.emplace_back("denials", denials);
    rep.summary.emplace_back("detected", detected);
    rep.summary.emplace_back("missed", missed);
    rep.summary.emplace_back("mass_on_original",
                             applied == 0 ? 0.0
                                          : static_cast<double>(counts[bits]) / applied);
    rep.summary.emplace_back("decode_histogram", sorted_histogram(counts));
    return rep;
}

inline scenario_report run_consensus(const scenario_config& cfg) {
    scenario_report rep;
    const random_source master(cfg.seed);
    const state_vector block =
        ghz_state(std::string(static_cast<std::size_t>(cfg.nodes), '0'));
    const auto strategies = strategies_for(cfg);
    std::uint64_t passes = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        random_source rng = master.split(static_cast<std::uint64_t>(t));
        const verification_round round = run_round(block, strategies, rng);
        if (round.pass) ++passes;
        std::string reported;
        for (int r : round.reported) reported += r ? '1' : '0';
        rep.trials.push_back({static_cast<std::uint64_t>(t), round.pass ? "pass" : "fail",
                              "target=" + std::to_string(round.target) +
                                  " reported=" + reported});
    }
    rep.summary.emplace_back("pass_rate", static_cast<double>(passes) / cfg.trials);
    return rep;
}

// Each episode is a fresh network fed `blocks` proposals, so local chains
// never outgrow the state-vector bound however many episodes run.
inline scenario_report run_network(const scenario_config& cfg) {
    scenario_report rep;
    const random_source master(cfg.seed);
    const auto strategies = strategies_for(cfg);
    const std::string ghz_bits(static_cast<std::size_t>(cfg.nodes), '0');
    std::uint64_t accepted = 0, proposals = 0;
    bool consistent = true;
    std::string all_events;
    for (int t = 0; t < cfg.trials; ++t) {
        random_source rng = master.split(static_cast<std::uint64_t>(t));
        std::vector<node> nodes;
        for (int i = 0; i < cfg.nodes; ++i) {
            nodes.push_back(node{i, strategies[static_cast<std::size_t>(i)], {}});
        }
        network net(std::move(nodes));
        std::uint64_t episode_accepted = 0;
        for (int b = 0; b < cfg.blocks; ++b) {
            block_proposal proposal{random_bits(2, rng),
                                    [&ghz_bits] { return ghz_state(ghz_bits); }};
            ++proposals;
            if (net.propose_and_commit(proposal, rng)) {
                ++accepted;
                ++episode_accepted;
            }
        }
        for (const auto& n : net.nodes()) {
            consistent = consistent && n.local_chain.logical_bits() ==
                                           net.nodes().front().local_chain.logical_bits();
        }
        all_events += "episode " + std::to_string(t) + "\n" + format_events(net);
        rep.trials.push_back(
            {static_cast<std::uint64_t>(t),
             std::to_string(episode_accepted) + "/" + std::to_string(cfg.blocks),
             "bits=" + net.nodes().front().local_chain.logical_bits()});
    }
    rep.summary.emplace_back("accept_rate",
                             static_cast<double>(accepted) / static_cast<double>(proposals));
    rep.summary.emplace_back("accepted", accepted);
    rep.summary.emplace_back("proposals", proposals);
    rep.summary.emplace_back("chains_consistent", static_cast<std::uint64_t>(consistent));
    rep.summary.emplace_back("events", all_events);
    rep.ok = consistent;
    return rep;
}

inline scenario_report run_compare(const scenario_config& cfg) {
    scenario_report rep;
    random_source master(cfg.seed);
    const std::string bits = random_bits(2 * cfg.blocks, master);

    // classical side: tamper block k, then ask the links which suffix died
    std::vector<std::string> payloads;
    for (int b = 0; b < cfg.blocks; ++b) {
        payloads.push_back(bits.substr(static_cast<std::size_t>(2 * b), 2));
    }
    classical::chain cchain = classical::build_chain(payloads);
    const std::size_t k =
        cfg.attack.target == "live"
            ? static_cast<std::size_t>(cfg.blocks - 1)
            : static_cast<std::size_t>(parse_target_id(cfg.attack.target, "attack"));
    std::string flipped = payloads[k];
    for (auto& c : flipped) c = c == '0' ? '1' : '0';
    classical::tamper_block(cchain, k, std::vector<std::uint8_t>(flipped.begin(), flipped.end()));
    const auto first_invalid = classical::validate_chain(cchain);
    const bool classical_as_expected =
        k + 1 < static_cast<std::size_t>(cfg.blocks)
            ? (first_invalid && *first_invalid == k + 1)
            : !first_invalid.has_value();

    // quantum side: same records, attack the one reachable photon
    std::map<std::string, std::uint64_t> counts;
    for (int t = 0; t < cfg.trials; ++t) {
        random_source rng = master.split(static_cast<std::uint64_t>(t));
        quantum_chain qchain = build_from_bits(bits, rng);
        qchain.tamper({cfg.attack.kind, qchain.live_photon()}, rng);
        const std::string decoded = qchain.decode(rng);
        ++counts[decoded];
        rep.trials.push_back({static_cast<std::uint64_t>(t),
                              decoded != bits ? "detected" : "missed", "decoded=" + decoded});
    }
    const double mass =
        static_cast<double>(counts.count(bits) ? counts[bits] : 0) / cfg.trials;

    rep.summary.emplace_back("encoded", bits);
    rep.summary.emplace_back("classical_tampered_block", static_cast<std::uint64_t>(k));
    rep.summary.emplace_back("classical_first_invalid",
                             first_invalid ? std::to_string(*first_invalid)
                                           : std::string("none"));
    rep.summary.emplace_back("classical_prefix_intact",
                             static_cast<std::uint64_t>(classical_as_expected));
    rep.summary.emplace_back("quantum_mass_on_original", mass);
    rep.summary.emplace_back("decode_histogram", sorted_histogram(counts));

    const bool paulis = cfg.attack.kind == attack_kind::bit_flip ||
                        cfg.attack.kind == attack_kind::phase_flip;
    rep.ok = classical_as_expected && (!paulis || mass == 0.0);
    return rep;
}

}  // namespace detail

inline scenario_report run_scenario(const scenario_config& cfg) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    scenario_report rep;
    switch (cfg.scenario) {
        case scenario_kind::roundtrip: rep = detail::run_roundtrip(cfg); break;
        case scenario_kind::tamper: rep = detail::run_tamper(cfg); break;
        case scenario_kind::consensus: rep = detail::run_consensus(cfg); break;
        case scenario_kind::network: rep = detail::run_network(cfg); break;
        case scenario_kind::compare: rep = detail::run_compare(cfg); break;
    }
    rep.config = cfg;
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// ---- rendering ------------------------------------------------------------

namespace detail {

// 17 significant digits: enough to reproduce any double exactly, and the
// same bytes on every run.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void json_escape(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

inline void append_json_string(std::string& out, std::string_view s) {
    out += '"';
    json_escape(out, s);
    out += '"';
}

inline void append_summary_value(std::string& out, const summary_value& v) {
    if (const auto* u = std::get_if<std::uint64_t>(&v)) {
        out += std::to_string(*u);
    } else if (const auto* d = std::get_if<double>(&v)) {
        out += format_double(*d);
    } else if (const auto* s = std::get_if<std::string>(&v)) {
        append_json_string(out, *s);
    } else {
        const auto& h = std::get<histogram>(v);
        out += '{';
        bool first = true;
        for (const auto& [key, count] : h) {
            if (!first) out += ',';
            first = false;
            append_json_string(out, key);
            out += ':';
            out += std::to_string(count);
        }
        out += '}';
    }
}

inline std::string config_json(const scenario_config& cfg) {
    std::string out = "{";
    out += "\"scenario\":";
    append_json_string(out, to_string(cfg.scenario));
    out += ",\"seed\":" + std::to_string(cfg.seed);
    out += ",\"blocks\":" + std::to_string(cfg.blocks);
    out += ",\"nodes\":" + std::to_string(cfg.nodes);
    out += ",\"dishonest\":[";
    for (std::size_t i = 0; i < cfg.dishonest.size(); ++i) {
        if (i) out += ',';
        append_json_string(out, std::to_string(cfg.dishonest[i].node) + ":" +
                                    to_string(cfg.dishonest[i].strategy));
    }
    out += "],\"trials\":" + std::to_string(cfg.trials);
    out += ",\"attack\":";
    append_json_string(out, std::string(to_string(cfg.attack.kind)) + ":" + cfg.attack.target);
    out += ",\"output_path\":";
    append_json_string(out, cfg.output_path);
    out += ",\"format\":";
    append_json_string(out, to_string(cfg.format));
    out += '}';
    return out;
}

}  // namespace detail

inline std::string render_report(const scenario_report& rep, report_format fmt) {
    std::string out;
    if (fmt == report_format::json) {
        out += "{\n\"config\":" + detail::config_json(rep.config) + ",\n\"trials\":[\n";
        for (std::size_t i = 0; i < rep.trials.size(); ++i) {
            const auto& t = rep.trials[i];
            out += "{\"trial\":" + std::to_string(t.trial) + ",\"outcome\":";
            detail::append_json_string(out, t.outcome);
            out += ",\"detail\":";
            detail::append_json_string(out, t.detail);
            out += '}';
            if (i + 1 < rep.trials.size()) out += ',';
            out += '\n';
        }
        out += "],\n\"summary\":{";
        for (std::size_t i = 0; i < rep.summary.size(); ++i) {
            if (i) out += ',';
            out += '\n';
            detail::append_json_string(out, rep.summary[i].first);
            out += ':';
            detail::append_summary_value(out, rep.summary[i].second);
        }
        out += "\n}\n}\n";
        return out;
    }

    out += "trial,outcome,detail\n";
    for (const auto& t : rep.trials) {
        std::string detail;
        for (char c : t.detail) {
            detail += c;
            if (c == '"') detail += '"';
        }
        out += std::to_string(t.trial) + "," + t.outcome + ",\"" + detail + "\"\n";
    }
    out += "# summary\n";
    for (const auto& [key, value] : rep.summary) {
        std::string rendered;
        detail::append_summary_value(rendered, value);
        out += "# " + key + "=" + rendered + "\n";
    }
    return out;
}

inline void emit_report(const scenario_report& rep, report_format fmt,
                        const std::filesystem::path& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw write_error("emit_report: cannot open '" + out_path.string() + "'");
    }
    const std::string text = render_report(rep, fmt);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw write_error("emit_report: write failed for '" + out_path.string() + "'");
    }
}

}  // namespace qbc
