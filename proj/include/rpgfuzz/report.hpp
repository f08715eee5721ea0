#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rpgfuzz/executor.hpp"

namespace rpgfuzz {

struct RunMetrics {
    std::set<std::string> sro;  // operations that returned 2xx at least once
    std::uint64_t total_requests = 0;
    std::map<std::string, std::uint64_t> requests_by_outcome;
    int rounds_completed = 0;
    std::map<std::string, std::uint64_t> rpg_mutation_counts;

    void record(const Observation& obs);
};

struct ReplayStep {
    std::uint64_t seq_id = 0;
    std::size_t step = 0;
    std::string method;
    std::string url;
    std::map<std::string, std::string> headers;
    std::string body;  // empty when the request had none
    int observed_status = 0;
};

struct BugReport {
    std::string bug_id;  // stable hash of the signature
    std::string operation_id;
    int status = 0;
    std::uint64_t body_fingerprint = 0;
    std::uint64_t occurrences = 0;
    std::string first_seen;  // observation id "seq:step"
    std::vector<ReplayStep> minimal_replay;
};

// Normalization applied before fingerprinting 5xx bodies: timestamps,
// UUIDs and digit runs are replaced with placeholders so one fault maps to
// one signature across inputs.
std::string normalize_error_body(const std::string& body);

std::uint64_t fingerprint_body(const std::string& body);

// Clusters server-error observations into one report per distinct
// (operation, status, body fingerprint) signature. full_sequences supplies
// the replay steps of the sequence that produced each first occurrence.
std::vector<BugReport> dedupe_failures(
    const std::vector<Observation>& observations,
    const std::map<std::uint64_t, std::vector<ReplayStep>>& full_sequences = {});

ReplayStep replay_step_from(const Observation& obs);

Json report_to_json(const RunMetrics& metrics, const std::vector<BugReport>& bugs,
                    const Json& config_echo, std::uint64_t seed, std::int64_t wall_ms,
                    const std::map<std::string, std::string>& artifact_paths);

// Atomic write (temp file then rename).
void write_file_atomic(const std::string& path, const std::string& content);

void emit_report(const RunMetrics& metrics, const std::vector<BugReport>& bugs,
                 const Json& config_echo, std::uint64_t seed, std::int64_t wall_ms,
                 const std::map<std::string, std::string>& artifact_paths,
                 const std::string& path);

std::string replay_steps_to_jsonl(const std::vector<ReplayStep>& steps);
std::vector<ReplayStep> parse_replay_jsonl(const std::string& content);
void emit_replay(const std::vector<ReplayStep>& steps, const std::string& path);

}  // namespace rpgfuzz
