#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpgfuzz/rng.hpp"
#include "rpgfuzz/rpg.hpp"
#include "rpgfuzz/spec_model.hpp"

namespace rpgfuzz {

using Json = nlohmann::json;

struct StrategyConfig {
    double p_reuse = 0.8;  // chance of replaying a last-success value
    double p_spec = 0.8;   // chance of drawing from declared ranges/enums
    int value_depth_limit = 4;
};

// Parameter assignments of the most recent 2xx call per operation, plus the
// run's random state. Mutated only by the orchestration loop.
struct ValuePool {
    struct SuccessRecord {
        std::map<std::string, Json> parameters;  // path/query/body-field values
        Json body;                               // full request body, if any
    };

    explicit ValuePool(std::uint64_t seed) : rng(seed) {}

    std::map<std::string, SuccessRecord> last_success;
    Rng rng;

    void record_success(const std::string& operation_id, SuccessRecord record) {
        last_success[operation_id] = std::move(record);
    }
};

// Responses of the earlier steps of the currently executing sequence,
// oldest first.
struct BindingContext {
    struct Entry {
        std::string operation_id;
        Json body;
    };
    std::vector<Entry> prior_responses;

    void push(std::string operation_id, Json body) {
        prior_responses.push_back({std::move(operation_id), std::move(body)});
    }
};

struct ConcreteRequest {
    HttpMethod method = HttpMethod::Get;
    std::string url;  // path with every {param} substituted, no query string
    std::map<std::string, std::string> query;
    std::optional<Json> body;
    std::map<std::string, std::string> headers;

    std::string url_with_query() const;
};

// One value obtained from a prior response, with the consumes edge that
// justified it (failure accounting needs the edge identity).
struct BoundValue {
    Json value;
    std::pair<std::string, std::string> edge;  // (schema, operation)
};

// Searches ctx newest-first for a response object whose schema has an
// active consumes edge into op mapping one of its properties to each
// parameter; confirmed equivalence tuples extend the search to sibling
// schemas. Absent bindings are simply missing entries.
std::map<std::string, BoundValue> bind_from_response(const std::string& op, const Rpg& rpg,
                                                     const BindingContext& ctx);

// Generates a value tree for a schema: reuse / declared-range / random per
// scalar, recursing into object and array properties down to depth_limit.
Json value_for_schema(const SchemaDef& schema, const ServiceSpec& spec, ValuePool& pool,
                      const StrategyConfig& strategy, int depth_limit,
                      const Json* reuse_source = nullptr);

struct BuiltRequest {
    ConcreteRequest request;
    std::map<std::string, Json> parameter_values;
    std::vector<std::pair<std::string, std::string>> bound_edges;  // consumes edges used
    bool bindings_used = false;
};

// Concretizes one sequence step. Every required parameter is assigned via,
// in order: a value bound from a prior response, the last successful value,
// a declared range or enum, or a random value. Throws
// UnboundRequiredPathParamError only if a path parameter ends up without
// any source (cannot happen for scalar parameters).
BuiltRequest next_request(const std::string& op, const Rpg& rpg, const ServiceSpec& spec,
                          const BindingContext& ctx, ValuePool& pool,
                          const StrategyConfig& strategy);

}  // namespace rpgfuzz
