#include "rpgfuzz/seq_gen.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "rpgfuzz/errors.hpp"
#include "rpgfuzz/rng.hpp"

namespace rpgfuzz {

namespace {

std::vector<std::string> ordered_schemas(const Rpg& rpg, const GenConfig& cfg) {
    std::vector<std::string> names;
    names.reserve(rpg.schema_nodes().size());
    for (const auto& [name, node] : rpg.schema_nodes()) names.push_back(name);
    if (cfg.schema_visit_order == SchemaVisitOrder::SeededShuffle) {
        Rng rng(cfg.shuffle_seed);
        rng.shuffle(names);
    }
    return names;
}

std::vector<std::string> ordered_neighbors(const Rpg& rpg, const std::string& schema,
                                           const GenConfig& cfg) {
    auto filter = cfg.use_candidate_equivalence ? Rpg::EquivalenceFilter::Any
                                                : Rpg::EquivalenceFilter::Confirmed;
    auto neighbors = rpg.equivalence_neighbors(schema, filter);
    std::vector<std::string> names(neighbors.begin(), neighbors.end());
    if (cfg.schema_visit_order == SchemaVisitOrder::SeededShuffle) {
        Rng rng(cfg.shuffle_seed ^ std::hash<std::string>{}(schema));
        rng.shuffle(names);
    }
    return names;
}

}  // namespace

SequenceSet producer_consumer_pairs(const Rpg& rpg, const std::string& schema,
                                    const GenConfig& cfg) {
    const auto producers = rpg.producers_of(schema);
    const auto consumers = rpg.consumers_of(schema);
    std::vector<CallSequence> pairs;
    for (const auto& out : producers) {
        for (const auto& in : consumers) {
            pairs.push_back({{out, in}, {schema}});
        }
    }
    if (pairs.size() > cfg.max_sequences_per_schema) {
        // Keep pairs rooted at a create first; those are the ones the CRUD
        // rules let grow.
        std::stable_sort(pairs.begin(), pairs.end(),
                         [&](const CallSequence& a, const CallSequence& b) {
                             bool ca = rpg.operation_node(a.operations[0])->crud ==
                                       CrudKind::Create;
                             bool cb = rpg.operation_node(b.operations[0])->crud ==
                                       CrudKind::Create;
                             if (ca != cb) return ca;
                             return a.operations < b.operations;
                         });
        pairs.resize(cfg.max_sequences_per_schema);
    }
    return SequenceSet(pairs.begin(), pairs.end());
}

SequenceSet concat_sequences(const SequenceSet& acc, const SequenceSet& fresh,
                             std::size_t max_sequence_length) {
    SequenceSet result = acc;
    for (const auto& seq : acc) {
        for (const auto& pair : fresh) {
            const auto& out = pair.operations[0];
            const auto& in = pair.operations[1];
            if (seq.operations.back() == out && seq.operations.size() + 1 <= max_sequence_length) {
                CallSequence extended = seq;
                extended.operations.push_back(in);
                extended.provenance.insert(pair.provenance.begin(), pair.provenance.end());
                result.insert(std::move(extended));
            }
            if (seq.operations.front() == in && seq.operations.size() + 1 <= max_sequence_length) {
                CallSequence extended = seq;
                extended.operations.insert(extended.operations.begin(), out);
                extended.provenance.insert(pair.provenance.begin(), pair.provenance.end());
                result.insert(std::move(extended));
            }
        }
    }
    return result;
}

SequenceSet visit(const Rpg& rpg, const std::string& schema, std::set<std::string>& visited,
                  SequenceSet acc, const GenConfig& cfg) {
    if (!rpg.has_schema(schema)) throw UnknownSchemaError("unknown schema " + schema);
    const auto producers = rpg.producers_of(schema);
    const auto consumers = rpg.consumers_of(schema);
    if (producers.empty() || consumers.empty()) return acc;

    visited.insert(schema);
    const SequenceSet pairs = producer_consumer_pairs(rpg, schema, cfg);
    acc = concat_sequences(acc, pairs, cfg.max_sequence_length);
    acc.insert(pairs.begin(), pairs.end());

    for (const auto& neighbor : ordered_neighbors(rpg, schema, cfg)) {
        if (visited.count(neighbor)) continue;
        acc = visit(rpg, neighbor, visited, std::move(acc), cfg);
    }
    return acc;
}

bool crud_valid(const std::vector<std::string>& operations, const Rpg& rpg) {
    // Which positions touch which schema, and how.
    struct Touch {
        std::size_t index;
        CrudKind kind;
    };
    std::map<std::string, std::vector<Touch>> by_schema;
    for (std::size_t i = 0; i < operations.size(); ++i) {
        const auto* node = rpg.operation_node(operations[i]);
        if (!node) throw UnknownNodeError("sequence references unknown operation " + operations[i]);
        for (const auto& schema : rpg.related_schemas(operations[i])) {
            by_schema[schema].push_back({i, node->crud});
        }
    }
    for (const auto& [schema, touches] : by_schema) {
        // A delete may not precede any other touch of the schema.
        for (std::size_t i = 0; i + 1 < touches.size(); ++i) {
            if (touches[i].kind == CrudKind::Delete) return false;
        }
        // Nothing may read, update or delete the schema before its first
        // create; sequences without a create are exempt.
        auto first_create = std::find_if(touches.begin(), touches.end(), [](const Touch& t) {
            return t.kind == CrudKind::Create;
        });
        if (first_create != touches.end() && first_create != touches.begin()) return false;
    }
    return true;
}

SequenceSet crud_filter(const SequenceSet& sequences, const Rpg& rpg) {
    SequenceSet result;
    for (const auto& seq : sequences) {
        if (crud_valid(seq.operations, rpg)) result.insert(seq);
    }
    return result;
}

SequenceSet generate_call_sequences(const Rpg& rpg, const GenConfig& cfg) {
    SequenceSet all;
    for (const auto& schema : ordered_schemas(rpg, cfg)) {
        std::set<std::string> visited;
        auto from_schema = visit(rpg, schema, visited, {}, cfg);
        all.insert(from_schema.begin(), from_schema.end());
    }
    all = crud_filter(all, rpg);
    for (const auto& [id, node] : rpg.operation_nodes()) {
        if (rpg.is_standalone(id)) all.insert({{id}, {}});
    }
    return all;
}

std::string sequences_to_json(const SequenceSet& sequences) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& seq : sequences) arr.push_back(seq.operations);
    return arr.dump(2);
}

}  // namespace rpgfuzz
