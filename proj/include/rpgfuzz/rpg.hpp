#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpgfuzz/spec_model.hpp"

namespace rpgfuzz {

struct SchemaNode {
    std::string schema_name;
    SchemaDef properties_attr;

    bool operator==(const SchemaNode&) const = default;
};

struct OperationNode {
    std::string operation_id;
    CrudKind crud = CrudKind::Read;
    std::string path;
    std::vector<ParameterDef> parameters;
    std::optional<std::string> request_body_schema;
    std::map<std::string, ResponseDef> responses;

    bool operator==(const OperationNode&) const = default;
};

enum class EdgeOrigin { Spec, Inferred };

// operation -> schema: the operation returns objects of the schema.
struct ProducesEdge {
    std::string from;  // operation_id
    std::string to;    // schema_name
    EdgeOrigin origin = EdgeOrigin::Spec;

    bool operator==(const ProducesEdge&) const = default;
    auto key() const { return std::pair(from, to); }
};

// One (schema property -> operation parameter) value route.
struct PropertyBinding {
    std::string property;
    std::string parameter;

    auto operator<=>(const PropertyBinding&) const = default;
};

enum class ConsumesStatus { Active, Infeasible };

// schema -> operation: properties of the schema feed the operation's inputs.
struct ConsumesEdge {
    std::string from;  // schema_name
    std::string to;    // operation_id
    std::vector<PropertyBinding> label;  // nonempty, sorted
    ConsumesStatus status = ConsumesStatus::Active;
    int consecutive_failures = 0;
    int infeasible_since_round = -1;

    bool operator==(const ConsumesEdge&) const = default;
    auto key() const { return std::pair(from, to); }
};

enum class EquivalenceState { Candidate, Confirmed };

// One (property of first endpoint, property of second endpoint) tuple.
struct EquivalenceTuple {
    std::string first_property;
    std::string second_property;

    auto operator<=>(const EquivalenceTuple&) const = default;
};

// Undirected schema <-> schema edge. Endpoints are stored sorted so the
// unordered pair has one canonical representation.
struct EquivalenceEdge {
    std::string first;   // lexicographically smaller schema name
    std::string second;  // larger
    EquivalenceState state = EquivalenceState::Candidate;
    std::vector<EquivalenceTuple> label;  // empty while candidate

    bool operator==(const EquivalenceEdge&) const = default;
    auto key() const { return std::pair(first, second); }
};

// Undirected operation <-> operation edge for operations sharing a path.
struct EndpointEdge {
    std::string first;
    std::string second;

    bool operator==(const EndpointEdge&) const = default;
    auto key() const { return std::pair(first, second); }
};

struct AddProducesEdge {
    std::string operation;
    std::string schema;
};

struct AddConsumesEdge {
    std::string schema;
    std::string operation;
    std::vector<PropertyBinding> bindings;
};

struct ConfirmEquivalence {
    std::string first;
    std::string second;
    std::vector<EquivalenceTuple> tuples;
};

struct MarkConsumesInfeasible {
    std::string schema;
    std::string operation;
    int round = 0;
    int failures = 0;
};

struct ReinstateConsumesEdge {
    std::string schema;
    std::string operation;
};

using RpgMutation = std::variant<AddProducesEdge, AddConsumesEdge, ConfirmEquivalence,
                                 MarkConsumesInfeasible, ReinstateConsumesEdge>;

std::string describe(const RpgMutation& m);

// The service model: schema nodes, operation nodes and the four edge
// families, with labels and per-edge bookkeeping. All containers are
// ordered so traversal and serialization are deterministic.
class Rpg {
public:
    Rpg() = default;

    // Node construction (used by the builder and by tests).
    void add_schema_node(SchemaNode node);
    void add_operation_node(OperationNode node);

    // Direct edge insertion for initial construction. Inserting an edge with
    // an existing (from, to) key merges labels and is otherwise a no-op.
    void add_produces_edge(const std::string& op, const std::string& schema,
                           EdgeOrigin origin = EdgeOrigin::Spec);
    void add_consumes_edge(const std::string& schema, const std::string& op,
                           std::vector<PropertyBinding> label);
    void add_equivalence_candidate(const std::string& a, const std::string& b);
    void add_endpoint_edge(const std::string& a, const std::string& b);

    bool has_schema(const std::string& name) const;
    bool has_operation(const std::string& id) const;
    const SchemaNode* schema_node(const std::string& name) const;
    const OperationNode* operation_node(const std::string& id) const;

    const std::map<std::string, SchemaNode>& schema_nodes() const { return schema_nodes_; }
    const std::map<std::string, OperationNode>& operation_nodes() const {
        return operation_nodes_;
    }
    const std::vector<ProducesEdge>& produces_edges() const { return produces_; }
    const std::vector<ConsumesEdge>& consumes_edges() const { return consumes_; }
    const std::vector<EquivalenceEdge>& equivalence_edges() const { return equivalence_; }
    const std::vector<EndpointEdge>& endpoint_edges() const { return endpoint_; }

    const ConsumesEdge* find_consumes(const std::string& schema, const std::string& op) const;
    const EquivalenceEdge* find_equivalence(const std::string& a, const std::string& b) const;

    // O_out: operations producing the schema in their responses.
    std::set<std::string> producers_of(const std::string& schema) const;
    // O_in: operations consuming the schema through an active edge.
    std::set<std::string> consumers_of(const std::string& schema) const;

    enum class EquivalenceFilter { Any, Confirmed };
    std::set<std::string> equivalence_neighbors(const std::string& schema,
                                                EquivalenceFilter filter) const;

    // Schemas the operation touches through produces or active consumes
    // edges; drives the CRUD ordering rules.
    std::set<std::string> related_schemas(const std::string& op) const;
    // Schemas the operation is documented (or learned) to return.
    std::set<std::string> produced_schemas(const std::string& op) const;
    bool is_standalone(const std::string& op) const;

    // Applies atomically: a mutation that fails validation leaves the
    // graph untouched.
    void apply_mutation(const RpgMutation& m);

    // Well-formedness: edge endpoints exist, no equivalence self-loops,
    // confirmed edges are labeled, consumes labels are nonempty and name
    // real properties/parameters. Throws InvalidMutationError on violation.
    void validate() const;

    bool operator==(const Rpg&) const = default;

    std::string to_dot() const;
    std::string to_json() const;

private:
    void apply_unchecked(const RpgMutation& m);
    ConsumesEdge* find_consumes_mut(const std::string& schema, const std::string& op);
    EquivalenceEdge* find_equivalence_mut(const std::string& a, const std::string& b);

    std::map<std::string, SchemaNode> schema_nodes_;
    std::map<std::string, OperationNode> operation_nodes_;
    std::vector<ProducesEdge> produces_;
    std::vector<ConsumesEdge> consumes_;
    std::vector<EquivalenceEdge> equivalence_;
    std::vector<EndpointEdge> endpoint_;
};

// Builds the document-derived graph: nodes for every named schema and every
// supported operation, produces edges from documented success responses,
// consumes edges from parameter/property name matching and non-create
// request bodies, endpoint edges between operations sharing a path, and
// candidate equivalence edges between schema pairs touching a common
// operation. Throws EmptySpecError when the spec has no supported operation.
Rpg build_initial_rpg(const ServiceSpec& spec);

}  // namespace rpgfuzz
