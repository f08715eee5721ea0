#include "rpgfuzz/feedback.hpp"

#include <algorithm>

namespace rpgfuzz {

namespace {

bool type_compatible(ValueKind kind, const Json& value) {
    switch (kind) {
        case ValueKind::String: return value.is_string();
        case ValueKind::Integer: return value.is_number_integer();
        case ValueKind::Number: return value.is_number();
        case ValueKind::Boolean: return value.is_boolean();
        case ValueKind::ObjectRef: return value.is_object();
        case ValueKind::ArrayOf: return value.is_array();
    }
    return false;
}

bool object_matches(const Json& object, const SchemaDef& schema, SchemaMatchMode mode) {
    if (!object.is_object()) return false;
    if (schema.properties.empty()) return false;

    std::vector<const PropertyDef*> required;
    for (const auto& [name, prop] : schema.properties) {
        if (prop.required) required.push_back(&prop);
    }
    if (required.empty()) {
        // Documents that never mark anything required still need teeth:
        // demand every property.
        for (const auto& [name, prop] : schema.properties) required.push_back(&prop);
    }
    for (const auto* prop : required) {
        if (!object.contains(prop->name)) return false;
        if (!type_compatible(prop->type, object[prop->name])) return false;
    }
    if (mode == SchemaMatchMode::ExactPropertySet) {
        if (object.size() != schema.properties.size()) return false;
        for (const auto& [key, value] : object.items()) {
            auto it = schema.properties.find(key);
            if (it == schema.properties.end()) return false;
            if (!type_compatible(it->second.type, value)) return false;
        }
    }
    return true;
}

std::optional<std::string> match_against(const Json& body,
                                         const std::map<std::string, SchemaDef>& schemas,
                                         SchemaMatchMode mode) {
    std::vector<const Json*> objects;
    if (body.is_object()) {
        objects.push_back(&body);
    } else if (body.is_array() && !body.empty()) {
        for (const auto& element : body) objects.push_back(&element);
    } else {
        return std::nullopt;
    }

    std::optional<std::string> found;
    for (const auto& [name, schema] : schemas) {
        bool all = std::all_of(objects.begin(), objects.end(), [&](const Json* obj) {
            return object_matches(*obj, schema, mode);
        });
        if (!all) continue;
        if (found) return std::nullopt;  // ambiguous: never guess
        found = name;
    }
    return found;
}

std::map<std::string, SchemaDef> schema_defs_of(const Rpg& rpg) {
    std::map<std::string, SchemaDef> out;
    for (const auto& [name, node] : rpg.schema_nodes()) out[name] = node.properties_attr;
    return out;
}

// Numeric widening and string trimming before equality so 4 and 4.0 and
// " x " and "x" pair up.
std::string canonical_value(const Json& value) {
    if (value.is_string()) {
        std::string s = value.get<std::string>();
        const auto begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }
    if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
    if (value.is_number()) {
        double d = value.get<double>();
        if (d == static_cast<double>(static_cast<std::int64_t>(d)))
            return std::to_string(static_cast<std::int64_t>(d));
        return std::to_string(d);
    }
    return value.dump();
}

bool is_scalar(const Json& value) {
    return value.is_string() || value.is_number() || value.is_boolean();
}

void intersect_candidates(EquivalenceEvidence::Direction& dir, const Json& from_object,
                          const Json& to_object) {
    for (const auto& [prop, value] : from_object.items()) {
        if (!is_scalar(value)) continue;
        const std::string canon = canonical_value(value);
        std::set<std::string> matches;
        for (const auto& [other_prop, other_value] : to_object.items()) {
            if (!is_scalar(other_value)) continue;
            if (canonical_value(other_value) == canon) matches.insert(other_prop);
        }
        auto it = dir.candidates.find(prop);
        if (it == dir.candidates.end()) {
            dir.candidates[prop] = matches;
            continue;
        }
        // Intersect, but keep candidates the other object simply lacks:
        // partial responses are not counterevidence.
        std::set<std::string> next;
        for (const auto& candidate : it->second) {
            if (matches.count(candidate) || !to_object.contains(candidate)) {
                next.insert(candidate);
            }
        }
        it->second = std::move(next);
    }
}

struct Resolution {
    std::vector<EquivalenceTuple> tuples;
    bool undecided = false;
};

Resolution resolve(const EquivalenceEvidence& evidence) {
    Resolution res;
    for (const auto& [prop, candidates] : evidence.first_to_second.candidates) {
        if (candidates.size() > 1) res.undecided = true;
    }
    for (const auto& [prop, candidates] : evidence.second_to_first.candidates) {
        if (candidates.size() > 1) res.undecided = true;
    }
    if (res.undecided) return res;
    for (const auto& [prop, candidates] : evidence.first_to_second.candidates) {
        if (candidates.size() != 1) continue;
        const std::string& other = *candidates.begin();
        auto back = evidence.second_to_first.candidates.find(other);
        if (back == evidence.second_to_first.candidates.end()) continue;
        if (back->second.size() == 1 && *back->second.begin() == prop) {
            res.tuples.push_back({prop, other});
        }
    }
    std::sort(res.tuples.begin(), res.tuples.end());
    return res;
}

}  // namespace

std::optional<std::string> match_response_to_schema(const Json& body, const ServiceSpec& spec,
                                                    SchemaMatchMode mode) {
    return match_against(body, spec.schemas, mode);
}

std::vector<RpgMutation> FeedbackEngine::ingest(const Rpg& rpg, const Observation& obs,
                                                int round) {
    std::vector<RpgMutation> mutations;

    if (sequence_objects_.sequence_id != obs.sequence_id) {
        sequence_objects_ = SequenceObjects{obs.sequence_id, {}};
    }

    if (obs.outcome == Outcome::Success2xx) {
        for (const auto& edge : obs.bound_edges) failure_counters_.erase(edge);

        Json body = Json::parse(obs.response.body, nullptr, false);
        if (body.is_discarded()) return mutations;

        std::string observed_schema;
        const auto produced = rpg.produced_schemas(obs.operation_id);
        if (produced.empty()) {
            // The document says nothing about this response; learn the
            // producer edge when the body aligns with exactly one schema.
            auto match = match_against(body, schema_defs_of(rpg), cfg_.schema_match_mode);
            if (match) {
                mutations.push_back(AddProducesEdge{obs.operation_id, *match});
                observed_schema = *match;
            }
        } else if (produced.size() == 1) {
            observed_schema = *produced.begin();
        } else {
            auto match = match_against(body, schema_defs_of(rpg), cfg_.schema_match_mode);
            if (match && produced.count(*match)) observed_schema = *match;
        }

        // Equivalence evidence works on whole single objects; arrays give
        // no way to tell which element pairs with what.
        if (!observed_schema.empty() && body.is_object()) {
            auto eq_mutations = process_equivalence(rpg, observed_schema, body);
            mutations.insert(mutations.end(), eq_mutations.begin(), eq_mutations.end());
            sequence_objects_.latest[observed_schema] = std::move(body);
        }
        return mutations;
    }

    if (obs.outcome == Outcome::TransportFailure) return mutations;

    // Non-2xx with inputs taken from earlier responses: pressure on the
    // edges that supplied those inputs. Randomly generated inputs are the
    // caller's own guesswork and prove nothing about an edge.
    if (obs.bindings_used) {
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& edge_key : obs.bound_edges) {
            if (!seen.insert(edge_key).second) continue;
            const auto* edge = rpg.find_consumes(edge_key.first, edge_key.second);
            if (!edge || edge->status != ConsumesStatus::Active) continue;
            int count = ++failure_counters_[edge_key];
            if (count >= cfg_.theta) {
                mutations.push_back(
                    MarkConsumesInfeasible{edge_key.first, edge_key.second, round, count});
                failure_counters_.erase(edge_key);
            }
        }
    }
    return mutations;
}

std::vector<RpgMutation> FeedbackEngine::process_equivalence(const Rpg& rpg,
                                                             const std::string& schema,
                                                             const Json& object) {
    std::vector<RpgMutation> mutations;
    for (const auto& edge : rpg.equivalence_edges()) {
        if (edge.state != EquivalenceState::Candidate) continue;
        if (edge.first != schema && edge.second != schema) continue;
        const std::string& other = edge.first == schema ? edge.second : edge.first;
        auto cached = sequence_objects_.latest.find(other);
        if (cached == sequence_objects_.latest.end()) continue;

        auto& evidence = evidence_[edge.key()];
        const Json& first_obj = edge.first == schema ? object : cached->second;
        const Json& second_obj = edge.first == schema ? cached->second : object;
        intersect_candidates(evidence.first_to_second, first_obj, second_obj);
        intersect_candidates(evidence.second_to_first, second_obj, first_obj);
        evidence.pair_count += 1;

        auto resolution = resolve(evidence);
        if (!resolution.undecided && !resolution.tuples.empty()) {
            mutations.push_back(ConfirmEquivalence{edge.first, edge.second, resolution.tuples});
            auto propagated = propagate_confirmed(rpg, edge.first, edge.second, resolution.tuples);
            mutations.insert(mutations.end(), propagated.begin(), propagated.end());
        }
    }
    return mutations;
}

std::vector<RpgMutation> FeedbackEngine::propagate_confirmed(
    const Rpg& rpg, const std::string& first, const std::string& second,
    const std::vector<EquivalenceTuple>& tuples) {
    std::vector<RpgMutation> mutations;
    for (const auto& tuple : tuples) {
        for (const auto& edge : rpg.consumes_edges()) {
            const bool from_first = edge.from == first;
            const bool from_second = edge.from == second;
            if (!from_first && !from_second) continue;
            const std::string& have_prop = from_first ? tuple.first_property : tuple.second_property;
            const std::string& sibling = from_first ? second : first;
            const std::string& sibling_prop =
                from_first ? tuple.second_property : tuple.first_property;
            for (const auto& binding : edge.label) {
                if (binding.property != have_prop) continue;
                const auto* existing = rpg.find_consumes(sibling, edge.to);
                const PropertyBinding wanted{sibling_prop, binding.parameter};
                if (existing &&
                    std::find(existing->label.begin(), existing->label.end(), wanted) !=
                        existing->label.end()) {
                    continue;
                }
                mutations.push_back(AddConsumesEdge{sibling, edge.to, {wanted}});
            }
        }
    }
    return mutations;
}

std::vector<RpgMutation> FeedbackEngine::maybe_reinstate(const Rpg& rpg, int round) {
    std::vector<RpgMutation> mutations;
    const ConsumesEdge* oldest = nullptr;
    for (const auto& edge : rpg.consumes_edges()) {
        if (edge.status != ConsumesStatus::Infeasible) continue;
        if (edge.infeasible_since_round < 0) continue;
        if (round - edge.infeasible_since_round < cfg_.reinstate_cooldown) continue;
        if (!oldest || edge.infeasible_since_round < oldest->infeasible_since_round ||
            (edge.infeasible_since_round == oldest->infeasible_since_round &&
             edge.key() < oldest->key())) {
            oldest = &edge;
        }
    }
    if (oldest) {
        failure_counters_.erase(oldest->key());
        mutations.push_back(ReinstateConsumesEdge{oldest->from, oldest->to});
    }
    return mutations;
}

}  // namespace rpgfuzz
