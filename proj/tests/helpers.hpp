#pragma once

#include "rpgfuzz/petstore_fixture.hpp"
#include "rpgfuzz/rng.hpp"
#include "rpgfuzz/rpg.hpp"
#include "rpgfuzz/spec_model.hpp"

namespace rpgfuzz::testing {

inline const ServiceSpec& petstore_spec() {
    static const ServiceSpec spec = parse_spec(petstore_spec_yaml());
    return spec;
}

inline Rpg petstore_rpg() { return build_initial_rpg(petstore_spec()); }

// The graph after a full feedback cycle: the learned producer edge, the
// confirmed Pet/Order link, and the name-collision edge cut.
inline Rpg refined_petstore_rpg() {
    Rpg rpg = petstore_rpg();
    rpg.apply_mutation(AddProducesEdge{"addPet", "Pet"});
    rpg.apply_mutation(ConfirmEquivalence{"Order", "Pet", {{"petId", "id"}}});
    rpg.apply_mutation(MarkConsumesInfeasible{"Order", "findPetsByStatus", 0, 5});
    return rpg;
}

// Random graphs small enough for the exhaustive reference enumerator.
inline Rpg random_small_rpg(Rng& rng) {
    Rpg rpg;
    const int schema_count = static_cast<int>(rng.int_in(1, 4));
    const int op_count = static_cast<int>(rng.int_in(1, 6));
    for (int s = 0; s < schema_count; ++s) {
        SchemaDef def;
        def.name = "S" + std::to_string(s);
        def.properties["x"] = PropertyDef{"x", ValueKind::Integer, {}, std::nullopt, true};
        rpg.add_schema_node({def.name, def});
    }
    const CrudKind kinds[] = {CrudKind::Create, CrudKind::Read, CrudKind::Update,
                              CrudKind::Delete};
    for (int o = 0; o < op_count; ++o) {
        OperationNode node;
        node.operation_id = "op" + std::to_string(o);
        node.crud = kinds[rng.int_in(0, 3)];
        node.path = "/p" + std::to_string(o);
        node.parameters = {
            ParameterDef{"x", ParamLocation::Query, ValueKind::Integer, std::nullopt, true, {}}};
        rpg.add_operation_node(node);
    }
    for (int o = 0; o < op_count; ++o) {
        for (int s = 0; s < schema_count; ++s) {
            const auto op = "op" + std::to_string(o);
            const auto schema = "S" + std::to_string(s);
            if (rng.chance(0.35)) rpg.add_produces_edge(op, schema);
            if (rng.chance(0.35)) {
                rpg.add_consumes_edge(schema, op, {{"x", "x"}});
                if (rng.chance(0.2)) rpg.apply_mutation(MarkConsumesInfeasible{schema, op, 0, 1});
            }
        }
    }
    for (int a = 0; a < schema_count; ++a) {
        for (int b = a + 1; b < schema_count; ++b) {
            if (!rng.chance(0.45)) continue;
            const auto sa = "S" + std::to_string(a);
            const auto sb = "S" + std::to_string(b);
            rpg.add_equivalence_candidate(sa, sb);
            if (rng.chance(0.6)) rpg.apply_mutation(ConfirmEquivalence{sa, sb, {{"x", "x"}}});
        }
    }
    return rpg;
}

}  // namespace rpgfuzz::testing
