#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "rpgfuzz/report.hpp"

using namespace rpgfuzz;

namespace {

Observation failure(const std::string& op, int status, const std::string& body,
                    std::uint64_t seq = 0, std::size_t step = 0) {
    Observation obs;
    obs.sequence_id = seq;
    obs.step_index = step;
    obs.operation_id = op;
    obs.request.method = HttpMethod::Get;
    obs.request.url = "/x";
    obs.response.status = status;
    obs.response.body = body;
    obs.outcome = classify(status);
    return obs;
}

}  // namespace

TEST_CASE("body normalization strips volatile fragments") {
    CHECK(normalize_error_body("ts 2022-01-02T10:11:12Z boom") ==
          normalize_error_body("ts 2023-11-30T23:59:01Z boom"));
    CHECK(normalize_error_body("id 550e8400-e29b-41d4-a716-446655440000 dup") ==
          normalize_error_body("id 123e4567-e89b-12d3-a456-426614174000 dup"));
    CHECK(normalize_error_body("count 17 items") == normalize_error_body("count 9005 items"));
    CHECK(normalize_error_body("alpha") != normalize_error_body("beta"));
}

TEST_CASE("identical faults with different timestamps are one bug") {
    const std::vector<Observation> observations{
        failure("getCommits", 500,
                R"({"exception":"CommandFailedException","at":"2022-01-02T10:11:12Z"})", 1, 0),
        failure("getCommits", 500,
                R"({"exception":"CommandFailedException","at":"2023-03-04T05:06:07Z"})", 2, 0),
    };
    const auto bugs = dedupe_failures(observations);
    REQUIRE(bugs.size() == 1);
    CHECK(bugs[0].occurrences == 2);
    CHECK(bugs[0].operation_id == "getCommits");
    CHECK(bugs[0].first_seen == "1:0");
}

TEST_CASE("no server errors, no bugs") {
    const std::vector<Observation> observations{failure("op", 404, "nope"),
                                                failure("op", 200, "ok")};
    CHECK(dedupe_failures(observations).empty());
}

TEST_CASE("same body under different status codes splits the signature") {
    const std::vector<Observation> observations{failure("op", 500, "boom"),
                                                failure("op", 503, "boom")};
    CHECK(dedupe_failures(observations).size() == 2);
}

TEST_CASE("different operations split the signature") {
    const std::vector<Observation> observations{failure("a", 500, "boom"),
                                                failure("b", 500, "boom")};
    const auto bugs = dedupe_failures(observations);
    REQUIRE(bugs.size() == 2);
    CHECK(bugs[0].bug_id != bugs[1].bug_id);
}

TEST_CASE("dedup is idempotent with doubled occurrence counts") {
    std::vector<Observation> once{
        failure("a", 500, "boom 12"), failure("a", 500, "boom 99"),
        failure("b", 500, "other"),
    };
    std::vector<Observation> twice = once;
    twice.insert(twice.end(), once.begin(), once.end());

    const auto bugs_once = dedupe_failures(once);
    const auto bugs_twice = dedupe_failures(twice);
    REQUIRE(bugs_once.size() == bugs_twice.size());
    for (std::size_t i = 0; i < bugs_once.size(); ++i) {
        CHECK(bugs_once[i].bug_id == bugs_twice[i].bug_id);
        CHECK(bugs_once[i].occurrences * 2 == bugs_twice[i].occurrences);
    }
}

TEST_CASE("the first occurrence keeps its full sequence for replay") {
    std::map<std::uint64_t, std::vector<ReplayStep>> sequences;
    sequences[3] = {ReplayStep{3, 0, "POST", "/v2/pet", {}, "{}", 200},
                    ReplayStep{3, 1, "GET", "/v2/pet/1", {}, "", 500}};
    const auto bugs = dedupe_failures({failure("getPetById", 500, "boom", 3, 1)}, sequences);
    REQUIRE(bugs.size() == 1);
    REQUIRE(bugs[0].minimal_replay.size() == 2);
    CHECK(bugs[0].minimal_replay[0].method == "POST");
}

TEST_CASE("replay files round-trip through jsonl") {
    std::vector<ReplayStep> steps{
        ReplayStep{1, 0, "POST", "/v2/pet", {{"Content-Type", "application/json"}},
                   R"({"id":1})", 200},
        ReplayStep{1, 1, "GET", "/v2/pet/1?x=a%20b", {}, "", 404},
    };
    const auto text = replay_steps_to_jsonl(steps);
    const auto parsed = parse_replay_jsonl(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].method == "POST");
    CHECK(parsed[0].body == R"({"id":1})");
    CHECK(parsed[1].url == "/v2/pet/1?x=a%20b");
    CHECK(parsed[1].observed_status == 404);

    CHECK(replay_steps_to_jsonl({}).empty());
}

TEST_CASE("report json is well-formed for empty and populated runs") {
    RunMetrics metrics;
    const auto empty = report_to_json(metrics, {}, Json::object(), 1, 0, {});
    CHECK(empty["metrics"]["sro_count"] == 0);
    CHECK(empty["metrics"]["total_requests"] == 0);
    CHECK(empty["bugs"].is_array());
    CHECK(empty["bugs"].empty());
    CHECK(empty["version"] == 1);

    metrics.record(failure("a", 500, "x"));
    metrics.record(failure("a", 200, "ok"));
    const auto bugs = dedupe_failures({failure("a", 500, "x")});
    const auto doc = report_to_json(metrics, bugs, Json{{"seed", 1}}, 1, 42, {});
    CHECK(doc["metrics"]["sro"] == Json::array({"a"}));
    CHECK(doc["metrics"]["requests_by_outcome"]["5xx"] == 1);
    CHECK(doc["bugs"].size() == 1);
    CHECK(doc["timing"]["wall_ms"] == 42);
}

TEST_CASE("atomic write leaves no temp file behind") {
    const auto dir = std::filesystem::temp_directory_path() / "rpgfuzz-report-test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "report.json").string();
    write_file_atomic(path, "{}");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
}
