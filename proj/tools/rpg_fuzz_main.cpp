#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rpgfuzz/http_transport.hpp"
#include "rpgfuzz/orchestrator.hpp"
#include "rpgfuzz/petstore_fixture.hpp"
#include "rpgfuzz/rpg.hpp"

namespace {

std::map<std::string, std::string> parse_headers(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> headers;
    for (const auto& entry : raw) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos)
            throw rpgfuzz::ConfigError("header must look like Name:Value, got " + entry);
        std::string value = entry.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        headers[entry.substr(0, colon)] = value;
    }
    return headers;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Property-graph guided black-box REST API fuzzer"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Fuzz a service and emit report artifacts");
    std::string spec_path, base_url, budget_text = "60s", out_dir = "out", ablation = "full";
    std::vector<std::string> raw_headers;
    bool fixture = false, no_fail_on_bug = false, explore_candidates = false;
    std::uint64_t seed = 1;
    int theta = 5, rounds = 0, timeout_s = 10, cooldown = 10;
    std::uint64_t max_requests = 0;
    std::size_t max_seq_len = 8, seqs_per_round = 200;
    double p_reuse = 0.8, p_spec = 0.8;
    run_cmd->add_option("--spec", spec_path, "OpenAPI document (.yaml/.yml/.json)");
    run_cmd->add_option("--base-url", base_url, "Target base URL, e.g. http://localhost:8080");
    run_cmd->add_flag("--fixture", fixture, "Run against the in-process pet store");
    run_cmd->add_option("--budget", budget_text, "Wall-clock budget, e.g. 60s, 10m, 8h");
    run_cmd->add_option("--seed", seed, "Random seed");
    run_cmd->add_option("--theta", theta, "Consecutive failures before an edge is cut");
    run_cmd->add_option("--header", raw_headers, "Extra request header Name:Value")
        ->take_all();
    run_cmd->add_option("--ablation", ablation, "full | no-rpg | rpg-only");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--rounds", rounds, "Round quota (0 = auto)");
    run_cmd->add_option("--max-requests", max_requests, "Request quota (0 = auto)");
    run_cmd->add_option("--sequences-per-round", seqs_per_round, "Sequences executed per round");
    run_cmd->add_option("--max-seq-len", max_seq_len, "Longest generated call sequence");
    run_cmd->add_option("--p-reuse", p_reuse, "Chance of reusing last successful values");
    run_cmd->add_option("--p-spec", p_spec, "Chance of drawing from declared ranges");
    run_cmd->add_option("--cooldown", cooldown, "Rounds before a cut edge may return");
    run_cmd->add_option("--timeout", timeout_s, "Per-request timeout in seconds");
    run_cmd->add_flag("--no-fail-on-bug", no_fail_on_bug, "Exit 0 even when bugs were found");
    run_cmd->add_flag("--explore-candidates", explore_candidates,
                      "Traverse unconfirmed schema links during generation");

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "Re-send a recorded replay file");
    std::string replay_path, replay_base_url;
    bool replay_fixture = false;
    std::vector<std::string> replay_headers;
    int replay_timeout = 10;
    replay_cmd->add_option("--file", replay_path, "replay.jsonl from a previous run")
        ->required();
    replay_cmd->add_option("--base-url", replay_base_url, "Target base URL");
    replay_cmd->add_flag("--fixture", replay_fixture, "Replay against a fresh fixture");
    replay_cmd->add_option("--header", replay_headers, "Extra request header Name:Value")
        ->take_all();
    replay_cmd->add_option("--timeout", replay_timeout, "Per-request timeout in seconds");

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "Build the initial graph without executing");
    std::string graph_spec, graph_out = "rpg.dot", graph_json_out;
    bool graph_fixture = false;
    graph_cmd->add_option("--spec", graph_spec, "OpenAPI document");
    graph_cmd->add_flag("--fixture", graph_fixture, "Use the bundled pet store document");
    graph_cmd->add_option("--out", graph_out, "DOT output path");
    graph_cmd->add_option("--json-out", graph_json_out, "Optional JSON snapshot path");

    // serve-fixture
    auto* serve_cmd =
        app.add_subcommand("serve-fixture", "Bind the fixture to a loopback socket");
    int serve_port = 8080;
    std::string serve_host = "127.0.0.1";
    serve_cmd->add_option("--port", serve_port, "Port to listen on");
    serve_cmd->add_option("--host", serve_host, "Host to bind");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            rpgfuzz::RunConfig cfg;
            cfg.spec_path = spec_path;
            cfg.base_url = base_url;
            cfg.use_fixture = fixture;
            cfg.budget = rpgfuzz::parse_duration(budget_text);
            cfg.seed = seed;
            cfg.theta = theta;
            cfg.p_reuse = p_reuse;
            cfg.p_spec = p_spec;
            cfg.max_sequence_length = max_seq_len;
            cfg.headers = parse_headers(raw_headers);
            cfg.out_dir = out_dir;
            cfg.max_rounds = rounds;
            cfg.max_requests = max_requests;
            cfg.sequences_per_round = seqs_per_round;
            cfg.reinstate_cooldown = cooldown;
            cfg.timeout_seconds = timeout_s;
            cfg.fail_on_bug = !no_fail_on_bug;
            cfg.use_candidate_equivalence = explore_candidates;
            if (ablation == "full") cfg.ablation = rpgfuzz::AblationMode::Full;
            else if (ablation == "no-rpg") cfg.ablation = rpgfuzz::AblationMode::NoRpg;
            else if (ablation == "rpg-only") cfg.ablation = rpgfuzz::AblationMode::RpgOnly;
            else throw rpgfuzz::ConfigError("unknown ablation mode " + ablation);

            const auto result = rpgfuzz::run(cfg);
            std::printf("requests: %llu  rounds: %d  sro: %zu  bugs: %zu\n",
                        static_cast<unsigned long long>(result.metrics.total_requests),
                        result.metrics.rounds_completed, result.metrics.sro.size(),
                        result.bugs.size());
            std::printf("report: %s\n", result.report_path.c_str());
            return result.exit_code;
        }
        if (replay_cmd->parsed()) {
            if (replay_fixture == !replay_base_url.empty())
                throw rpgfuzz::ConfigError(
                    "exactly one of --fixture and --base-url must be given");
            std::unique_ptr<rpgfuzz::Transport> transport;
            if (replay_fixture) {
                transport = std::make_unique<rpgfuzz::PetstoreFixture>();
            } else {
                transport = std::make_unique<rpgfuzz::HttpTransport>(
                    replay_base_url, replay_timeout, parse_headers(replay_headers));
            }
            const auto outcome = rpgfuzz::replay_file(replay_path, *transport);
            std::printf("replayed %zu steps, %zu status mismatches\n", outcome.total,
                        outcome.mismatches);
            return outcome.mismatches == 0 ? 0 : 2;
        }
        if (graph_cmd->parsed()) {
            rpgfuzz::ServiceSpec spec;
            if (graph_fixture) {
                spec = rpgfuzz::parse_spec(rpgfuzz::petstore_spec_yaml());
            } else if (!graph_spec.empty()) {
                spec = rpgfuzz::parse_spec_file(graph_spec);
            } else {
                throw rpgfuzz::ConfigError("graph needs --spec or --fixture");
            }
            const auto rpg = rpgfuzz::build_initial_rpg(spec);
            rpgfuzz::write_file_atomic(graph_out, rpg.to_dot());
            std::printf("wrote %s\n", graph_out.c_str());
            if (!graph_json_out.empty()) {
                rpgfuzz::write_file_atomic(graph_json_out, rpg.to_json());
                std::printf("wrote %s\n", graph_json_out.c_str());
            }
            return 0;
        }
        if (serve_cmd->parsed()) {
            rpgfuzz::PetstoreFixture fixture_service;
            std::printf("fixture listening on %s:%d\n", serve_host.c_str(), serve_port);
            rpgfuzz::serve_transport(fixture_service, serve_host, serve_port);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
