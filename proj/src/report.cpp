#include "rpgfuzz/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpgfuzz/errors.hpp"

namespace rpgfuzz {

void RunMetrics::record(const Observation& obs) {
    ++total_requests;
    ++requests_by_outcome[to_string(obs.outcome)];
    if (obs.outcome == Outcome::Success2xx) sro.insert(obs.operation_id);
}

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// UUIDs first (they contain digit runs), then ISO-ish timestamps, then any
// remaining digit run.
std::string strip_uuids(const std::string& text) {
    static const int kGroups[] = {8, 4, 4, 4, 12};
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t j = i;
        bool matched = true;
        for (int g = 0; g < 5 && matched; ++g) {
            for (int k = 0; k < kGroups[g]; ++k, ++j) {
                if (j >= text.size() || !is_hex(text[j])) {
                    matched = false;
                    break;
                }
            }
            if (matched && g < 4) {
                if (j >= text.size() || text[j] != '-') matched = false;
                ++j;
            }
        }
        if (matched) {
            out += "<uuid>";
            i = j;
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

std::string strip_digit_runs(const std::string& text) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            while (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                    text[i] == ':' || text[i] == '-' || text[i] == 'T' || text[i] == 'Z')) {
                // Consume timestamp-ish punctuation only while digits keep
                // coming after it.
                if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                    if (i + 1 >= text.size() ||
                        !std::isdigit(static_cast<unsigned char>(text[i + 1])))
                        break;
                }
                ++i;
            }
            out += "<n>";
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

}  // namespace

std::string normalize_error_body(const std::string& body) {
    return strip_digit_runs(strip_uuids(body));
}

std::uint64_t fingerprint_body(const std::string& body) {
    const std::string normalized = normalize_error_body(body).substr(0, 2048);
    // FNV-1a, 64 bit.
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : normalized) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

ReplayStep replay_step_from(const Observation& obs) {
    ReplayStep step;
    step.seq_id = obs.sequence_id;
    step.step = obs.step_index;
    step.method = to_string(obs.request.method);
    step.url = obs.request.url_with_query();
    step.headers = obs.request.headers;
    step.body = obs.request.body ? obs.request.body->dump() : "";
    step.observed_status = obs.response.status;
    return step;
}

std::vector<BugReport> dedupe_failures(
    const std::vector<Observation>& observations,
    const std::map<std::uint64_t, std::vector<ReplayStep>>& full_sequences) {
    struct Key {
        std::string operation_id;
        int status;
        std::uint64_t fingerprint;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, BugReport> by_signature;
    for (const auto& obs : observations) {
        if (obs.outcome != Outcome::ServerError5xx) continue;
        Key key{obs.operation_id, obs.response.status, fingerprint_body(obs.response.body)};
        auto it = by_signature.find(key);
        if (it == by_signature.end()) {
            BugReport report;
            char buf[32];
            std::uint64_t id_hash = key.fingerprint;
            for (unsigned char c : key.operation_id) {
                id_hash ^= c;
                id_hash *= 1099511628211ull;
            }
            id_hash ^= static_cast<std::uint64_t>(key.status);
            id_hash *= 1099511628211ull;
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(id_hash));
            report.bug_id = buf;
            report.operation_id = key.operation_id;
            report.status = key.status;
            report.body_fingerprint = key.fingerprint;
            report.occurrences = 1;
            report.first_seen = obs.id();
            auto seq_it = full_sequences.find(obs.sequence_id);
            if (seq_it != full_sequences.end()) {
                report.minimal_replay = seq_it->second;
            } else {
                report.minimal_replay = {replay_step_from(obs)};
            }
            by_signature.emplace(key, std::move(report));
        } else {
            ++it->second.occurrences;
        }
    }
    std::vector<BugReport> out;
    out.reserve(by_signature.size());
    for (auto& [key, report] : by_signature) out.push_back(std::move(report));
    return out;
}

namespace {

Json replay_step_to_json(const ReplayStep& step) {
    return Json{{"seq_id", step.seq_id},   {"step", step.step},
                {"method", step.method},   {"url", step.url},
                {"headers", step.headers}, {"body", step.body},
                {"observed_status", step.observed_status}};
}

ReplayStep replay_step_from_json(const Json& j) {
    ReplayStep step;
    step.seq_id = j.at("seq_id").get<std::uint64_t>();
    step.step = j.at("step").get<std::size_t>();
    step.method = j.at("method").get<std::string>();
    step.url = j.at("url").get<std::string>();
    if (j.contains("headers"))
        step.headers = j.at("headers").get<std::map<std::string, std::string>>();
    step.body = j.value("body", "");
    step.observed_status = j.value("observed_status", 0);
    return step;
}

}  // namespace

Json report_to_json(const RunMetrics& metrics, const std::vector<BugReport>& bugs,
                    const Json& config_echo, std::uint64_t seed, std::int64_t wall_ms,
                    const std::map<std::string, std::string>& artifact_paths) {
    Json doc;
    doc["version"] = 1;
    doc["seed"] = seed;
    doc["config"] = config_echo;
    Json m;
    m["sro"] = metrics.sro;
    m["sro_count"] = metrics.sro.size();
    m["total_requests"] = metrics.total_requests;
    m["requests_by_outcome"] = metrics.requests_by_outcome;
    m["rounds_completed"] = metrics.rounds_completed;
    m["rpg_mutations"] = metrics.rpg_mutation_counts;
    doc["metrics"] = m;
    Json bug_array = Json::array();
    for (const auto& bug : bugs) {
        Json b;
        b["id"] = bug.bug_id;
        b["operation"] = bug.operation_id;
        b["status"] = bug.status;
        b["body_fingerprint"] = bug.body_fingerprint;
        b["occurrences"] = bug.occurrences;
        b["first_seen"] = bug.first_seen;
        Json steps = Json::array();
        for (const auto& step : bug.minimal_replay) steps.push_back(replay_step_to_json(step));
        b["replay"] = steps;
        bug_array.push_back(b);
    }
    doc["bugs"] = bug_array;
    doc["artifacts"] = artifact_paths;
    doc["timing"] = Json{{"wall_ms", wall_ms}};
    return doc;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << content;
        if (!out) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void emit_report(const RunMetrics& metrics, const std::vector<BugReport>& bugs,
                 const Json& config_echo, std::uint64_t seed, std::int64_t wall_ms,
                 const std::map<std::string, std::string>& artifact_paths,
                 const std::string& path) {
    write_file_atomic(
        path, report_to_json(metrics, bugs, config_echo, seed, wall_ms, artifact_paths).dump(2) +
                  "\n");
}

std::string replay_steps_to_jsonl(const std::vector<ReplayStep>& steps) {
    std::ostringstream out;
    for (const auto& step : steps) out << replay_step_to_json(step).dump() << "\n";
    return out.str();
}

std::vector<ReplayStep> parse_replay_jsonl(const std::string& content) {
    std::vector<ReplayStep> steps;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("malformed replay line: " + line);
        steps.push_back(replay_step_from_json(j));
    }
    return steps;
}

void emit_replay(const std::vector<ReplayStep>& steps, const std::string& path) {
    write_file_atomic(path, replay_steps_to_jsonl(steps));
}

}  // namespace rpgfuzz
