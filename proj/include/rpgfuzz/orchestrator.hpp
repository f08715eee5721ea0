#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpgfuzz/feedback.hpp"
#include "rpgfuzz/report.hpp"

namespace rpgfuzz {

enum class AblationMode { Full, NoRpg, RpgOnly };

std::string to_string(AblationMode m);

struct RunConfig {
    std::string spec_path;  // empty with use_fixture: the bundled document
    std::string base_url;
    bool use_fixture = false;
    std::chrono::milliseconds budget{0};
    std::uint64_t seed = 1;
    int theta = 5;
    double p_reuse = 0.8;
    double p_spec = 0.8;
    std::size_t max_sequence_length = 8;
    std::map<std::string, std::string> headers;
    AblationMode ablation = AblationMode::Full;
    std::string out_dir = ".";
    // Stop conditions besides the wall clock; 0 means auto (desk-scale
    // quotas in fixture mode, effectively unlimited against live targets).
    // Whichever limit trips first ends the run.
    int max_rounds = 0;
    std::uint64_t max_requests = 0;
    std::size_t sequences_per_round = 200;
    int reinstate_cooldown = 10;
    int timeout_seconds = 10;
    bool fail_on_bug = true;
    bool use_candidate_equivalence = false;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<BugReport> bugs;
    int exit_code = 0;
    std::string report_path;
    std::string replay_path;
};

// The fuzzing loop: build the initial graph from the document, then
// generate -> execute -> ingest -> refine each round until a budget or
// quota trips. Artifacts (report.json, replay.jsonl, rpg.json, rpg.dot,
// feedback.log.jsonl) land in cfg.out_dir.
RunResult run(const RunConfig& cfg);

// Re-sends a recorded replay file verbatim and diffs statuses. Returns the
// number of mismatched steps.
struct ReplayOutcome {
    std::size_t total = 0;
    std::size_t mismatches = 0;
};
ReplayOutcome replay_file(const std::string& path, Transport& transport);

std::chrono::milliseconds parse_duration(const std::string& text);

// Uniform random sequences for the guidance-free ablation; reads nothing
// from the graph but the operation roster.
std::vector<CallSequence> random_call_sequences(const std::vector<std::string>& operations,
                                                std::size_t count, std::size_t max_length,
                                                Rng& rng);

ConcreteRequest request_from_replay_step(const ReplayStep& step);

}  // namespace rpgfuzz
