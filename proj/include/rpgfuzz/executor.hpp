#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpgfuzz/param_gen.hpp"
#include "rpgfuzz/seq_gen.hpp"

namespace rpgfuzz {

struct RawResponse {
    int status = 0;  // 0 marks a transport failure
    std::string body;
    std::map<std::string, std::string> headers;
    std::int64_t latency_ms = 0;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual RawResponse send(const ConcreteRequest& request) = 0;
};

enum class Outcome { Success2xx, ClientError4xx, ServerError5xx, Other, TransportFailure };

std::string to_string(Outcome o);

Outcome classify(int status);

struct Observation {
    std::uint64_t sequence_id = 0;
    std::size_t step_index = 0;
    std::string operation_id;
    ConcreteRequest request;
    RawResponse response;
    Outcome outcome = Outcome::TransportFailure;
    bool bindings_used = false;
    std::vector<std::pair<std::string, std::string>> bound_edges;

    std::string id() const {
        return std::to_string(sequence_id) + ":" + std::to_string(step_index);
    }
};

struct ExecConfig {
    int transport_failure_abort_threshold = 3;
    // Off in the guidance-free ablation: response values can only be routed
    // into later parameters by following edge labels.
    bool use_response_bindings = true;
};

// Runs a sequence step by step: each step is concretized against all prior
// responses, sent, and classified. Execution continues past failed steps;
// only repeated transport failures abort the remainder. 2xx responses feed
// the value pool and the binding context.
std::vector<Observation> execute_sequence(const CallSequence& seq, std::uint64_t sequence_id,
                                          Transport& transport, const Rpg& rpg,
                                          const ServiceSpec& spec, ValuePool& pool,
                                          const StrategyConfig& strategy,
                                          const ExecConfig& cfg);

}  // namespace rpgfuzz
