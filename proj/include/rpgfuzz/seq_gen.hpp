#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rpgfuzz/rpg.hpp"

namespace rpgfuzz {

struct CallSequence {
    std::vector<std::string> operations;
    std::set<std::string> provenance;  // schemas visited while building it

    bool operator<(const CallSequence& other) const { return operations < other.operations; }
    bool operator==(const CallSequence& other) const { return operations == other.operations; }
};

// Deduplicated by operation vector; ordered for deterministic iteration.
using SequenceSet = std::set<CallSequence>;

enum class SchemaVisitOrder { Lexicographic, SeededShuffle };

struct GenConfig {
    std::size_t max_sequence_length = 8;
    std::size_t max_sequences_per_schema = 64;
    SchemaVisitOrder schema_visit_order = SchemaVisitOrder::Lexicographic;
    std::uint64_t shuffle_seed = 0;
    bool use_candidate_equivalence = false;
};

// The producer x consumer product for one schema: every (o_out, o_in) pair
// as a length-2 sequence, capped at max_sequences_per_schema with pairs
// whose producer is a create ranked first.
SequenceSet producer_consumer_pairs(const Rpg& rpg, const std::string& schema,
                                    const GenConfig& cfg);

// Extends sequences in acc by pairs from fresh: (o1..on) + (o_out,o_in)
// appends o_in when on == o_out and prepends o_out when o_in == o1.
// Extensions beyond max_sequence_length are dropped. The fresh pairs
// themselves are not added; callers union them separately.
SequenceSet concat_sequences(const SequenceSet& acc, const SequenceSet& fresh,
                             std::size_t max_sequence_length);

// One traversal step: contributes the schema's pairs, extends acc with
// them, then recurses into unvisited equivalence neighbors. A schema whose
// producer or consumer set is empty contributes nothing and blocks
// traversal through itself.
SequenceSet visit(const Rpg& rpg, const std::string& schema, std::set<std::string>& visited,
                  SequenceSet acc, const GenConfig& cfg);

// Drops sequences violating the CRUD ordering rules: for some schema, a
// delete precedes another operation on that schema, or the sequence creates
// the schema and some read/update/delete on it precedes the first create.
SequenceSet crud_filter(const SequenceSet& sequences, const Rpg& rpg);

bool crud_valid(const std::vector<std::string>& operations, const Rpg& rpg);

// Full generation pass: visits every schema, filters, then appends
// standalone operations (no incident active edges) as single-element
// sequences.
SequenceSet generate_call_sequences(const Rpg& rpg, const GenConfig& cfg);

std::string sequences_to_json(const SequenceSet& sequences);

}  // namespace rpgfuzz
