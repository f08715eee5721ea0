#include "rpgfuzz/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "rpgfuzz/http_transport.hpp"
#include "rpgfuzz/petstore_fixture.hpp"

namespace rpgfuzz {

std::string to_string(AblationMode m) {
    switch (m) {
        case AblationMode::Full: return "full";
        case AblationMode::NoRpg: return "no-rpg";
        case AblationMode::RpgOnly: return "rpg-only";
    }
    return "full";
}

std::chrono::milliseconds parse_duration(const std::string& text) {
    if (text.empty()) throw ConfigError("empty duration");
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(text, &pos);
    } catch (...) {
        throw ConfigError("cannot parse duration " + text);
    }
    std::string unit = text.substr(pos);
    double ms = 0;
    if (unit == "ms") ms = value;
    else if (unit == "s" || unit.empty()) ms = value * 1000.0;
    else if (unit == "m") ms = value * 60'000.0;
    else if (unit == "h") ms = value * 3'600'000.0;
    else throw ConfigError("unknown duration unit " + unit);
    return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

std::vector<CallSequence> random_call_sequences(const std::vector<std::string>& operations,
                                                std::size_t count, std::size_t max_length,
                                                Rng& rng) {
    std::vector<CallSequence> out;
    if (operations.empty()) return out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto length = static_cast<std::size_t>(
            rng.int_in(1, static_cast<std::int64_t>(std::max<std::size_t>(max_length, 1))));
        CallSequence seq;
        for (std::size_t k = 0; k < length; ++k) seq.operations.push_back(rng.pick(operations));
        out.push_back(std::move(seq));
    }
    return out;
}

namespace {

std::string mutation_kind(const RpgMutation& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, AddProducesEdge>) return "add-produces";
            else if constexpr (std::is_same_v<T, AddConsumesEdge>) return "add-consumes";
            else if constexpr (std::is_same_v<T, ConfirmEquivalence>) return "confirm-equivalence";
            else if constexpr (std::is_same_v<T, MarkConsumesInfeasible>) return "mark-infeasible";
            else return "reinstate";
        },
        m);
}

std::vector<CallSequence> pick_round_sequences(const SequenceSet& all, const Rpg& rpg,
                                               std::size_t budget) {
    std::vector<CallSequence> ordered(all.begin(), all.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](const CallSequence& a, const CallSequence& b) {
                         const auto* na = rpg.operation_node(a.operations.front());
                         const auto* nb = rpg.operation_node(b.operations.front());
                         const bool ca = na && na->crud == CrudKind::Create;
                         const bool cb = nb && nb->crud == CrudKind::Create;
                         if (ca != cb) return ca;
                         return a.operations < b.operations;
                     });
    if (ordered.size() > budget) ordered.resize(budget);
    return ordered;
}

std::string url_decode(const std::string& text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            out.push_back(static_cast<char>(std::stoi(text.substr(i + 1, 2), nullptr, 16)));
            i += 2;
        } else if (text[i] == '+') {
            out.push_back(' ');
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

}  // namespace

ConcreteRequest request_from_replay_step(const ReplayStep& step) {
    ConcreteRequest request;
    if (step.method == "POST") request.method = HttpMethod::Post;
    else if (step.method == "PUT") request.method = HttpMethod::Put;
    else if (step.method == "DELETE") request.method = HttpMethod::Delete;
    else request.method = HttpMethod::Get;
    const auto qpos = step.url.find('?');
    request.url = step.url.substr(0, qpos);
    if (qpos != std::string::npos) {
        std::string rest = step.url.substr(qpos + 1);
        std::istringstream in(rest);
        std::string pair;
        while (std::getline(in, pair, '&')) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos) continue;
            request.query[url_decode(pair.substr(0, eq))] = url_decode(pair.substr(eq + 1));
        }
    }
    request.headers = step.headers;
    if (!step.body.empty()) {
        Json parsed = Json::parse(step.body, nullptr, false);
        if (!parsed.is_discarded()) request.body = std::move(parsed);
    }
    return request;
}

ReplayOutcome replay_file(const std::string& path, Transport& transport) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open replay file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto steps = parse_replay_jsonl(buf.str());
    ReplayOutcome outcome;
    for (const auto& step : steps) {
        RawResponse response = transport.send(request_from_replay_step(step));
        ++outcome.total;
        if (response.status != step.observed_status) ++outcome.mismatches;
    }
    return outcome;
}

RunResult run(const RunConfig& cfg) {
    if (cfg.budget.count() <= 0) throw ConfigError("budget must be positive");
    if (cfg.use_fixture == !cfg.base_url.empty())
        throw ConfigError("exactly one of --fixture and --base-url must be given");
    if (cfg.theta < 1) throw ConfigError("theta must be at least 1");

    const int max_rounds =
        cfg.max_rounds > 0 ? cfg.max_rounds : (cfg.use_fixture ? 300 : 1'000'000);
    const std::uint64_t max_requests =
        cfg.max_requests > 0
            ? cfg.max_requests
            : (cfg.use_fixture ? 30'000 : std::numeric_limits<std::uint64_t>::max());

    ServiceSpec spec;
    if (!cfg.spec_path.empty()) {
        spec = parse_spec_file(cfg.spec_path);
    } else if (cfg.use_fixture) {
        spec = parse_spec(petstore_spec_yaml());
    } else {
        throw ConfigError("--spec is required unless running against the fixture");
    }

    Rpg rpg = build_initial_rpg(spec);

    std::unique_ptr<Transport> transport;
    if (cfg.use_fixture) {
        transport = std::make_unique<PetstoreFixture>();
    } else {
        transport =
            std::make_unique<HttpTransport>(cfg.base_url, cfg.timeout_seconds, cfg.headers);
    }

    std::filesystem::create_directories(cfg.out_dir);
    const auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    };

    ValuePool pool(cfg.seed);
    StrategyConfig strategy;
    strategy.p_reuse = cfg.p_reuse;
    strategy.p_spec = cfg.p_spec;
    FeedbackEngine engine(
        FeedbackConfig{cfg.theta, cfg.reinstate_cooldown, SchemaMatchMode::AllRequiredProperties});
    GenConfig gen;
    gen.max_sequence_length = cfg.max_sequence_length;
    gen.use_candidate_equivalence = cfg.use_candidate_equivalence;
    ExecConfig exec_cfg;
    exec_cfg.use_response_bindings = cfg.ablation != AblationMode::NoRpg;

    std::vector<std::string> operation_ids;
    for (const auto& [id, node] : rpg.operation_nodes()) operation_ids.push_back(id);

    RunMetrics metrics;
    std::vector<Observation> server_errors;
    std::map<std::uint64_t, std::vector<ReplayStep>> error_sequences;
    std::ostringstream replay_stream;
    std::ostringstream feedback_stream;

    const auto started = std::chrono::steady_clock::now();
    const auto deadline = started + cfg.budget;
    std::uint64_t sequence_counter = 0;

    auto log_mutation = [&](const RpgMutation& m, int round, const std::string& obs_id) {
        metrics.rpg_mutation_counts[mutation_kind(m)] += 1;
        feedback_stream << Json{{"round", round},
                                {"kind", mutation_kind(m)},
                                {"detail", describe(m)},
                                {"obs", obs_id}}
                               .dump()
                        << "\n";
    };

    for (int round = 0; round < max_rounds; ++round) {
        if (std::chrono::steady_clock::now() >= deadline) break;
        if (metrics.total_requests >= max_requests) break;

        std::vector<CallSequence> planned;
        if (cfg.ablation == AblationMode::NoRpg) {
            planned = random_call_sequences(operation_ids, cfg.sequences_per_round,
                                            cfg.max_sequence_length, pool.rng);
        } else {
            planned = pick_round_sequences(generate_call_sequences(rpg, gen), rpg,
                                           cfg.sequences_per_round);
        }

        for (const auto& seq : planned) {
            if (std::chrono::steady_clock::now() >= deadline) break;
            if (metrics.total_requests >= max_requests) break;
            const std::uint64_t seq_id = sequence_counter++;
            const auto observations =
                execute_sequence(seq, seq_id, *transport, rpg, spec, pool, strategy, exec_cfg);

            bool has_server_error = false;
            for (const auto& obs : observations) {
                metrics.record(obs);
                replay_stream << Json{{"seq_id", obs.sequence_id},
                                      {"step", obs.step_index},
                                      {"method", to_string(obs.request.method)},
                                      {"url", obs.request.url_with_query()},
                                      {"headers", obs.request.headers},
                                      {"body",
                                       obs.request.body ? obs.request.body->dump() : ""},
                                      {"observed_status", obs.response.status}}
                                     .dump()
                              << "\n";
                if (obs.outcome == Outcome::ServerError5xx) {
                    server_errors.push_back(obs);
                    has_server_error = true;
                }
                if (cfg.ablation != AblationMode::RpgOnly) {
                    for (const auto& m : engine.ingest(rpg, obs, round)) {
                        rpg.apply_mutation(m);
                        log_mutation(m, round, obs.id());
                    }
                }
            }
            if (has_server_error) {
                std::vector<ReplayStep> steps;
                steps.reserve(observations.size());
                for (const auto& obs : observations) steps.push_back(replay_step_from(obs));
                error_sequences.emplace(seq_id, std::move(steps));
            }
        }

        if (cfg.ablation != AblationMode::RpgOnly) {
            for (const auto& m : engine.maybe_reinstate(rpg, round)) {
                rpg.apply_mutation(m);
                log_mutation(m, round, "");
            }
        }
        metrics.rounds_completed = round + 1;
    }

    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    RunResult result;
    result.metrics = metrics;
    result.bugs = dedupe_failures(server_errors, error_sequences);
    result.report_path = out_path("report.json");
    result.replay_path = out_path("replay.jsonl");

    write_file_atomic(result.replay_path, replay_stream.str());
    write_file_atomic(out_path("feedback.log.jsonl"), feedback_stream.str());
    write_file_atomic(out_path("rpg.json"), rpg.to_json());
    write_file_atomic(out_path("rpg.dot"), rpg.to_dot());

    Json config_echo{{"spec", cfg.spec_path.empty() ? "(bundled)" : cfg.spec_path},
                     {"target", cfg.use_fixture ? "fixture" : cfg.base_url},
                     {"budget_ms", cfg.budget.count()},
                     {"seed", cfg.seed},
                     {"theta", cfg.theta},
                     {"p_reuse", cfg.p_reuse},
                     {"p_spec", cfg.p_spec},
                     {"max_sequence_length", cfg.max_sequence_length},
                     {"ablation", to_string(cfg.ablation)},
                     {"max_rounds", max_rounds},
                     {"max_requests", max_requests},
                     {"sequences_per_round", cfg.sequences_per_round},
                     {"reinstate_cooldown", cfg.reinstate_cooldown},
                     {"use_candidate_equivalence", cfg.use_candidate_equivalence}};
    emit_report(metrics, result.bugs, config_echo, cfg.seed, wall_ms,
                {{"replay", result.replay_path},
                 {"feedback_log", out_path("feedback.log.jsonl")},
                 {"rpg_json", out_path("rpg.json")},
                 {"rpg_dot", out_path("rpg.dot")}},
                result.report_path);

    result.exit_code = (!result.bugs.empty() && cfg.fail_on_bug) ? 2 : 0;
    return result;
}

}  // namespace rpgfuzz
