#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rpgfuzz/executor.hpp"
#include "rpgfuzz/rpg.hpp"

namespace rpgfuzz {

enum class SchemaMatchMode { AllRequiredProperties, ExactPropertySet };

struct FeedbackConfig {
    int theta = 5;                 // consecutive bound-input failures before an edge is cut
    int reinstate_cooldown = 10;   // rounds an infeasible edge rests
    SchemaMatchMode schema_match_mode = SchemaMatchMode::AllRequiredProperties;
};

// Returns the unique schema whose properties the body satisfies under the
// mode, or nothing when zero or several schemas match. Arrays are matched
// element-wise against a single schema.
std::optional<std::string> match_response_to_schema(const Json& body, const ServiceSpec& spec,
                                                    SchemaMatchMode mode);

// Per candidate equivalence edge: for each property on each side, the set
// of other-side properties whose values matched in every co-observed object
// pair so far. Candidate sets only shrink. A property that has never been
// co-observed has no entry.
struct EquivalenceEvidence {
    struct Direction {
        std::map<std::string, std::set<std::string>> candidates;
    };
    Direction first_to_second;
    Direction second_to_first;
    int pair_count = 0;
};

// Turns observations into graph mutations: produces-edge learning from
// undocumented response bodies, property equivalence inference from
// co-observed value pairs, consumes-edge propagation from confirmed tuples,
// and consecutive-failure edge removal with reinstatement.
class FeedbackEngine {
public:
    explicit FeedbackEngine(FeedbackConfig cfg) : cfg_(cfg) {}

    std::vector<RpgMutation> ingest(const Rpg& rpg, const Observation& obs, int round);

    // Reinstates at most one cooled-down infeasible edge, oldest first.
    std::vector<RpgMutation> maybe_reinstate(const Rpg& rpg, int round);

    const std::map<std::pair<std::string, std::string>, EquivalenceEvidence>& evidence() const {
        return evidence_;
    }
    const FeedbackConfig& config() const { return cfg_; }

private:
    // Single objects of known schema seen in the current sequence, newest
    // per schema, used to form co-observation pairs.
    struct SequenceObjects {
        std::uint64_t sequence_id = 0;
        std::map<std::string, Json> latest;
    };

    std::vector<RpgMutation> process_equivalence(const Rpg& rpg, const std::string& schema,
                                                 const Json& object);
    std::vector<RpgMutation> propagate_confirmed(const Rpg& rpg, const std::string& first,
                                                 const std::string& second,
                                                 const std::vector<EquivalenceTuple>& tuples);

    FeedbackConfig cfg_;
    std::map<std::pair<std::string, std::string>, EquivalenceEvidence> evidence_;
    // Live consecutive-failure counts per consumes edge; the edge itself
    // records the count only once it is marked infeasible.
    std::map<std::pair<std::string, std::string>, int> failure_counters_;
    SequenceObjects sequence_objects_;

public:
    int failure_count(const std::string& schema, const std::string& op) const {
        auto it = failure_counters_.find({schema, op});
        return it == failure_counters_.end() ? 0 : it->second;
    }
};

}  // namespace rpgfuzz
