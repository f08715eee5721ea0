#include "rpgfuzz/executor.hpp"

#include "rpgfuzz/errors.hpp"

namespace rpgfuzz {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Success2xx: return "2xx";
        case Outcome::ClientError4xx: return "4xx";
        case Outcome::ServerError5xx: return "5xx";
        case Outcome::Other: return "other";
        case Outcome::TransportFailure: return "transport-failure";
    }
    return "other";
}

Outcome classify(int status) {
    if (status >= 200 && status <= 299) return Outcome::Success2xx;
    if (status >= 400 && status <= 499) return Outcome::ClientError4xx;
    if (status >= 500 && status <= 599) return Outcome::ServerError5xx;
    return Outcome::Other;
}

std::vector<Observation> execute_sequence(const CallSequence& seq, std::uint64_t sequence_id,
                                          Transport& transport, const Rpg& rpg,
                                          const ServiceSpec& spec, ValuePool& pool,
                                          const StrategyConfig& strategy, const ExecConfig& cfg) {
    std::vector<Observation> observations;
    BindingContext ctx;
    int consecutive_transport_failures = 0;

    for (std::size_t step = 0; step < seq.operations.size(); ++step) {
        const auto& op = seq.operations[step];
        BuiltRequest built;
        try {
            built = next_request(op, rpg, spec, ctx, pool, strategy);
        } catch (const UnboundRequiredPathParamError&) {
            // A graph gap, not a service response; skip the step and let
            // later steps bind from what already executed.
            continue;
        }

        RawResponse response = transport.send(built.request);
        Observation obs;
        obs.sequence_id = sequence_id;
        obs.step_index = step;
        obs.operation_id = op;
        obs.request = built.request;
        obs.response = response;
        obs.outcome = response.status == 0 ? Outcome::TransportFailure : classify(response.status);
        obs.bindings_used = built.bindings_used;
        obs.bound_edges = built.bound_edges;
        observations.push_back(obs);

        if (obs.outcome == Outcome::TransportFailure) {
            if (++consecutive_transport_failures >= cfg.transport_failure_abort_threshold) break;
            continue;
        }
        consecutive_transport_failures = 0;

        if (obs.outcome == Outcome::Success2xx) {
            pool.record_success(op, {built.parameter_values,
                                     built.request.body ? *built.request.body : Json()});
            if (cfg.use_response_bindings && !response.body.empty()) {
                Json parsed = Json::parse(response.body, nullptr, false);
                if (!parsed.is_discarded()) ctx.push(op, std::move(parsed));
            }
        }
    }
    return observations;
}

}  // namespace rpgfuzz
