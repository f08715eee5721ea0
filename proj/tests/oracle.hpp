#pragma once

// Test-only reference enumerator for call sequence generation. It shares
// nothing with the production traversal: sequences are enumerated
// exhaustively and each is then checked for constructibility with an
// interval DP over the deterministic schema visit timeline, followed by an
// independent CRUD-order scan.

#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rpgfuzz/rpg.hpp"
#include "rpgfuzz/seq_gen.hpp"

namespace rpgfuzz::testing {

namespace oracle_detail {

using Pair = std::pair<std::string, std::string>;

inline void timeline_dfs(const Rpg& rpg, const std::string& schema,
                         Rpg::EquivalenceFilter filter, std::set<std::string>& visited,
                         std::vector<std::string>& out) {
    if (visited.count(schema)) return;
    if (rpg.producers_of(schema).empty() || rpg.consumers_of(schema).empty()) return;
    visited.insert(schema);
    out.push_back(schema);
    for (const auto& neighbor : rpg.equivalence_neighbors(schema, filter)) {
        timeline_dfs(rpg, neighbor, filter, visited, out);
    }
}

// Can the link sequence be assembled outward from some seed pair, one link
// per strictly later timeline step?
inline bool buildable_on_timeline(const std::vector<Pair>& links,
                                  const std::vector<std::set<Pair>>& step_pairs) {
    const std::size_t n = links.size();
    constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
    // earliest[l][r]: minimal step index (1-based) completing links [l, r]
    std::vector<std::vector<std::size_t>> earliest(n, std::vector<std::size_t>(n, kUnreachable));

    auto first_step_with = [&](const Pair& link, std::size_t after) -> std::size_t {
        for (std::size_t t = after; t < step_pairs.size(); ++t) {
            if (step_pairs[t].count(link)) return t + 1;
        }
        return kUnreachable;
    };

    for (std::size_t l = 0; l < n; ++l) earliest[l][l] = first_step_with(links[l], 0);
    for (std::size_t span = 2; span <= n; ++span) {
        for (std::size_t l = 0; l + span <= n; ++l) {
            const std::size_t r = l + span - 1;
            std::size_t best = kUnreachable;
            if (earliest[l + 1][r] != kUnreachable) {
                const std::size_t t = first_step_with(links[l], earliest[l + 1][r]);
                best = std::min(best, t);
            }
            if (earliest[l][r - 1] != kUnreachable) {
                const std::size_t t = first_step_with(links[r], earliest[l][r - 1]);
                best = std::min(best, t);
            }
            earliest[l][r] = best;
        }
    }
    return earliest[0][n - 1] != kUnreachable;
}

inline bool crud_order_ok(const std::vector<std::string>& ops, const Rpg& rpg) {
    std::set<std::string> schemas;
    for (const auto& e : rpg.produces_edges()) schemas.insert(e.to);
    for (const auto& e : rpg.consumes_edges()) schemas.insert(e.from);
    for (const auto& schema : schemas) {
        std::vector<CrudKind> touches;
        for (const auto& op : ops) {
            bool related = false;
            for (const auto& e : rpg.produces_edges()) {
                if (e.from == op && e.to == schema) related = true;
            }
            for (const auto& e : rpg.consumes_edges()) {
                if (e.from == schema && e.to == op && e.status == ConsumesStatus::Active)
                    related = true;
            }
            if (related) touches.push_back(rpg.operation_node(op)->crud);
        }
        for (std::size_t i = 0; i + 1 < touches.size(); ++i) {
            if (touches[i] == CrudKind::Delete) return false;
        }
        bool saw_create = false;
        bool other_before_create = false;
        for (const auto kind : touches) {
            if (kind == CrudKind::Create) {
                saw_create = true;
                break;
            }
            other_before_create = true;
        }
        if (saw_create && other_before_create) return false;
    }
    return true;
}

}  // namespace oracle_detail

inline std::set<std::vector<std::string>> oracle_sequences(const Rpg& rpg,
                                                           const GenConfig& cfg) {
    using oracle_detail::Pair;
    const auto filter = cfg.use_candidate_equivalence ? Rpg::EquivalenceFilter::Any
                                                      : Rpg::EquivalenceFilter::Confirmed;

    // One pair-set timeline per top-level start schema.
    std::vector<std::vector<std::set<Pair>>> timelines;
    for (const auto& [start, node] : rpg.schema_nodes()) {
        std::set<std::string> visited;
        std::vector<std::string> order;
        oracle_detail::timeline_dfs(rpg, start, filter, visited, order);
        if (order.empty()) continue;
        std::vector<std::set<Pair>> steps;
        for (const auto& schema : order) {
            std::set<Pair> pairs;
            for (const auto& out : rpg.producers_of(schema)) {
                for (const auto& in : rpg.consumers_of(schema)) pairs.insert({out, in});
            }
            steps.push_back(std::move(pairs));
        }
        timelines.push_back(std::move(steps));
    }

    std::vector<std::string> ops;
    for (const auto& [id, node] : rpg.operation_nodes()) ops.push_back(id);

    std::set<std::vector<std::string>> result;
    std::vector<std::string> current;
    auto enumerate = [&](auto&& self, std::size_t remaining) -> void {
        if (current.size() >= 2) {
            std::vector<Pair> links;
            for (std::size_t i = 0; i + 1 < current.size(); ++i)
                links.push_back({current[i], current[i + 1]});
            for (const auto& timeline : timelines) {
                if (oracle_detail::buildable_on_timeline(links, timeline)) {
                    if (oracle_detail::crud_order_ok(current, rpg)) result.insert(current);
                    break;
                }
            }
        }
        if (remaining == 0) return;
        for (const auto& op : ops) {
            current.push_back(op);
            self(self, remaining - 1);
            current.pop_back();
        }
    };
    enumerate(enumerate, cfg.max_sequence_length);

    for (const auto& op : ops) {
        if (rpg.is_standalone(op)) result.insert({op});
    }
    return result;
}

}  // namespace rpgfuzz::testing
