#include "rpgfuzz/rpg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rpgfuzz/errors.hpp"

namespace rpgfuzz {

using Json = nlohmann::json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool iequals(const std::string& a, const std::string& b) { return lower(a) == lower(b); }

void sort_label(std::vector<PropertyBinding>& label) {
    std::sort(label.begin(), label.end());
    label.erase(std::unique(label.begin(), label.end()), label.end());
}

std::pair<std::string, std::string> sorted_pair(const std::string& a, const std::string& b) {
    return a <= b ? std::pair(a, b) : std::pair(b, a);
}

}  // namespace

std::string describe(const RpgMutation& m) {
    std::ostringstream out;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, AddProducesEdge>) {
                out << "add-produces " << v.operation << " -> " << v.schema;
            } else if constexpr (std::is_same_v<T, AddConsumesEdge>) {
                out << "add-consumes " << v.schema << " -> " << v.operation << " [";
                for (std::size_t i = 0; i < v.bindings.size(); ++i) {
                    if (i) out << ", ";
                    out << v.bindings[i].property << "->" << v.bindings[i].parameter;
                }
                out << "]";
            } else if constexpr (std::is_same_v<T, ConfirmEquivalence>) {
                out << "confirm-equivalence {" << v.first << ", " << v.second << "} [";
                for (std::size_t i = 0; i < v.tuples.size(); ++i) {
                    if (i) out << ", ";
                    out << v.tuples[i].first_property << "=" << v.tuples[i].second_property;
                }
                out << "]";
            } else if constexpr (std::is_same_v<T, MarkConsumesInfeasible>) {
                out << "mark-infeasible " << v.schema << " -> " << v.operation;
            } else if constexpr (std::is_same_v<T, ReinstateConsumesEdge>) {
                out << "reinstate " << v.schema << " -> " << v.operation;
            }
        },
        m);
    return out.str();
}

void Rpg::add_schema_node(SchemaNode node) {
    schema_nodes_.emplace(node.schema_name, std::move(node));
}

void Rpg::add_operation_node(OperationNode node) {
    operation_nodes_.emplace(node.operation_id, std::move(node));
}

void Rpg::add_produces_edge(const std::string& op, const std::string& schema, EdgeOrigin origin) {
    if (!has_operation(op)) throw UnknownNodeError("produces edge from unknown operation " + op);
    if (!has_schema(schema)) throw UnknownNodeError("produces edge to unknown schema " + schema);
    for (const auto& e : produces_) {
        if (e.from == op && e.to == schema) return;  // idempotent
    }
    produces_.push_back({op, schema, origin});
}

void Rpg::add_consumes_edge(const std::string& schema, const std::string& op,
                            std::vector<PropertyBinding> label) {
    if (!has_schema(schema)) throw UnknownNodeError("consumes edge from unknown schema " + schema);
    if (!has_operation(op)) throw UnknownNodeError("consumes edge to unknown operation " + op);
    if (label.empty()) throw InvalidMutationError("consumes edge label must be nonempty");
    sort_label(label);
    if (auto* existing = find_consumes_mut(schema, op)) {
        auto merged = existing->label;
        merged.insert(merged.end(), label.begin(), label.end());
        sort_label(merged);
        existing->label = std::move(merged);
        return;
    }
    consumes_.push_back({schema, op, std::move(label), ConsumesStatus::Active, 0, -1});
}

void Rpg::add_equivalence_candidate(const std::string& a, const std::string& b) {
    if (a == b) throw InvalidMutationError("equivalence edge endpoints must differ");
    if (!has_schema(a) || !has_schema(b))
        throw UnknownNodeError("equivalence edge endpoint missing: {" + a + ", " + b + "}");
    auto [first, second] = sorted_pair(a, b);
    if (find_equivalence(first, second)) return;
    equivalence_.push_back({first, second, EquivalenceState::Candidate, {}});
}

void Rpg::add_endpoint_edge(const std::string& a, const std::string& b) {
    if (a == b) throw InvalidMutationError("endpoint edge endpoints must differ");
    if (!has_operation(a) || !has_operation(b))
        throw UnknownNodeError("endpoint edge endpoint missing: {" + a + ", " + b + "}");
    auto [first, second] = sorted_pair(a, b);
    for (const auto& e : endpoint_) {
        if (e.first == first && e.second == second) return;
    }
    endpoint_.push_back({first, second});
}

bool Rpg::has_schema(const std::string& name) const { return schema_nodes_.count(name) > 0; }

bool Rpg::has_operation(const std::string& id) const { return operation_nodes_.count(id) > 0; }

const SchemaNode* Rpg::schema_node(const std::string& name) const {
    auto it = schema_nodes_.find(name);
    return it == schema_nodes_.end() ? nullptr : &it->second;
}

const OperationNode* Rpg::operation_node(const std::string& id) const {
    auto it = operation_nodes_.find(id);
    return it == operation_nodes_.end() ? nullptr : &it->second;
}

const ConsumesEdge* Rpg::find_consumes(const std::string& schema, const std::string& op) const {
    for (const auto& e : consumes_) {
        if (e.from == schema && e.to == op) return &e;
    }
    return nullptr;
}

ConsumesEdge* Rpg::find_consumes_mut(const std::string& schema, const std::string& op) {
    for (auto& e : consumes_) {
        if (e.from == schema && e.to == op) return &e;
    }
    return nullptr;
}

const EquivalenceEdge* Rpg::find_equivalence(const std::string& a, const std::string& b) const {
    auto [first, second] = sorted_pair(a, b);
    for (const auto& e : equivalence_) {
        if (e.first == first && e.second == second) return &e;
    }
    return nullptr;
}

EquivalenceEdge* Rpg::find_equivalence_mut(const std::string& a, const std::string& b) {
    auto [first, second] = sorted_pair(a, b);
    for (auto& e : equivalence_) {
        if (e.first == first && e.second == second) return &e;
    }
    return nullptr;
}

std::set<std::string> Rpg::producers_of(const std::string& schema) const {
    if (!has_schema(schema)) throw UnknownSchemaError("unknown schema " + schema);
    std::set<std::string> out;
    for (const auto& e : produces_) {
        if (e.to == schema) out.insert(e.from);
    }
    return out;
}

std::set<std::string> Rpg::consumers_of(const std::string& schema) const {
    if (!has_schema(schema)) throw UnknownSchemaError("unknown schema " + schema);
    std::set<std::string> out;
    for (const auto& e : consumes_) {
        if (e.from == schema && e.status == ConsumesStatus::Active) out.insert(e.to);
    }
    return out;
}

std::set<std::string> Rpg::equivalence_neighbors(const std::string& schema,
                                                 EquivalenceFilter filter) const {
    if (!has_schema(schema)) throw UnknownSchemaError("unknown schema " + schema);
    std::set<std::string> out;
    for (const auto& e : equivalence_) {
        if (filter == EquivalenceFilter::Confirmed && e.state != EquivalenceState::Confirmed)
            continue;
        if (e.first == schema) out.insert(e.second);
        if (e.second == schema) out.insert(e.first);
    }
    return out;
}

std::set<std::string> Rpg::related_schemas(const std::string& op) const {
    std::set<std::string> out;
    for (const auto& e : produces_) {
        if (e.from == op) out.insert(e.to);
    }
    for (const auto& e : consumes_) {
        if (e.to == op && e.status == ConsumesStatus::Active) out.insert(e.from);
    }
    return out;
}

std::set<std::string> Rpg::produced_schemas(const std::string& op) const {
    std::set<std::string> out;
    for (const auto& e : produces_) {
        if (e.from == op) out.insert(e.to);
    }
    return out;
}

bool Rpg::is_standalone(const std::string& op) const {
    for (const auto& e : produces_) {
        if (e.from == op) return false;
    }
    for (const auto& e : consumes_) {
        if (e.to == op && e.status == ConsumesStatus::Active) return false;
    }
    return true;
}

void Rpg::apply_mutation(const RpgMutation& m) {
    Rpg next = *this;
    next.apply_unchecked(m);
    next.validate();
    *this = std::move(next);
}

void Rpg::apply_unchecked(const RpgMutation& m) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, AddProducesEdge>) {
                add_produces_edge(v.operation, v.schema, EdgeOrigin::Inferred);
            } else if constexpr (std::is_same_v<T, AddConsumesEdge>) {
                add_consumes_edge(v.schema, v.operation, v.bindings);
            } else if constexpr (std::is_same_v<T, ConfirmEquivalence>) {
                auto* edge = find_equivalence_mut(v.first, v.second);
                if (!edge)
                    throw InvalidMutationError("no equivalence candidate {" + v.first + ", " +
                                               v.second + "}");
                if (edge->state == EquivalenceState::Confirmed)
                    throw InvalidMutationError("equivalence {" + v.first + ", " + v.second +
                                               "} already confirmed");
                if (v.tuples.empty())
                    throw InvalidMutationError("confirmation requires at least one tuple");
                edge->state = EquivalenceState::Confirmed;
                edge->label = v.tuples;
                if (v.first > v.second) {
                    for (auto& t : edge->label)
                        std::swap(t.first_property, t.second_property);
                }
                std::sort(edge->label.begin(), edge->label.end());
            } else if constexpr (std::is_same_v<T, MarkConsumesInfeasible>) {
                auto* edge = find_consumes_mut(v.schema, v.operation);
                if (!edge)
                    throw InvalidMutationError("no consumes edge " + v.schema + " -> " +
                                               v.operation);
                edge->status = ConsumesStatus::Infeasible;
                edge->infeasible_since_round = v.round;
                edge->consecutive_failures = v.failures;
            } else if constexpr (std::is_same_v<T, ReinstateConsumesEdge>) {
                auto* edge = find_consumes_mut(v.schema, v.operation);
                if (!edge)
                    throw InvalidMutationError("no consumes edge " + v.schema + " -> " +
                                               v.operation);
                if (edge->status != ConsumesStatus::Infeasible)
                    throw InvalidMutationError("edge " + v.schema + " -> " + v.operation +
                                               " is not infeasible");
                edge->status = ConsumesStatus::Active;
                edge->consecutive_failures = 0;
                edge->infeasible_since_round = -1;
            }
        },
        m);
}

void Rpg::validate() const {
    for (const auto& e : produces_) {
        if (!has_operation(e.from) || !has_schema(e.to))
            throw InvalidMutationError("dangling produces edge " + e.from + " -> " + e.to);
    }
    for (const auto& e : consumes_) {
        if (!has_schema(e.from) || !has_operation(e.to))
            throw InvalidMutationError("dangling consumes edge " + e.from + " -> " + e.to);
        if (e.label.empty())
            throw InvalidMutationError("empty label on consumes edge " + e.from + " -> " + e.to);
        const auto& schema = schema_nodes_.at(e.from);
        const auto& op = operation_nodes_.at(e.to);
        for (const auto& binding : e.label) {
            if (!schema.properties_attr.properties.count(binding.property))
                throw InvalidMutationError("consumes label names unknown property " + e.from +
                                           "." + binding.property);
            bool param_known =
                std::any_of(op.parameters.begin(), op.parameters.end(),
                            [&](const ParameterDef& p) { return p.name == binding.parameter; });
            if (!param_known && op.request_body_schema &&
                schema_nodes_.count(*op.request_body_schema)) {
                const auto& body = schema_nodes_.at(*op.request_body_schema);
                param_known = body.properties_attr.properties.count(binding.parameter) > 0;
            }
            if (!param_known)
                throw InvalidMutationError("consumes label names unknown parameter " + e.to +
                                           "." + binding.parameter);
        }
    }
    for (const auto& e : equivalence_) {
        if (e.first == e.second)
            throw InvalidMutationError("equivalence self-loop on " + e.first);
        if (!has_schema(e.first) || !has_schema(e.second))
            throw InvalidMutationError("dangling equivalence edge {" + e.first + ", " + e.second +
                                       "}");
        if (e.state == EquivalenceState::Confirmed && e.label.empty())
            throw InvalidMutationError("confirmed equivalence without label {" + e.first + ", " +
                                       e.second + "}");
        if (e.state == EquivalenceState::Candidate && !e.label.empty())
            throw InvalidMutationError("labeled candidate {" + e.first + ", " + e.second + "}");
    }
    for (const auto& e : endpoint_) {
        if (!has_operation(e.first) || !has_operation(e.second))
            throw InvalidMutationError("dangling endpoint edge {" + e.first + ", " + e.second +
                                       "}");
        if (operation_nodes_.at(e.first).path != operation_nodes_.at(e.second).path)
            throw InvalidMutationError("endpoint edge across different paths {" + e.first + ", " +
                                       e.second + "}");
    }
}

Rpg build_initial_rpg(const ServiceSpec& spec) {
    Rpg rpg;
    std::size_t supported = 0;
    for (const auto* op : spec.operations()) {
        if (op->supported) ++supported;
    }
    if (supported == 0) throw EmptySpecError("spec contains no supported operation");

    for (const auto& [name, schema] : spec.schemas) {
        rpg.add_schema_node({name, schema});
    }
    for (const auto& ep : spec.endpoints) {
        for (const auto& op : ep.operations) {
            if (!op.supported) continue;
            rpg.add_operation_node({op.operation_id, crud_kind(op), ep.path, op.parameters,
                                    op.request_body_schema, op.responses});
        }
    }

    for (const auto& ep : spec.endpoints) {
        std::vector<std::string> ids;
        for (const auto& op : ep.operations) {
            if (!op.supported) continue;
            ids.push_back(op.operation_id);

            // Produces: documented success responses.
            for (const auto& [code, resp] : op.responses) {
                if (!resp.schema_name) continue;
                if (code.size() != 3 || code[0] != '2') continue;
                rpg.add_produces_edge(op.operation_id, *resp.schema_name, EdgeOrigin::Spec);
            }

            // Consumes: parameter names matched against schema properties,
            // case-insensitively, plus the <schemaName>Id -> id convention.
            for (const auto& [sname, schema] : spec.schemas) {
                std::vector<PropertyBinding> bindings;
                for (const auto& param : op.parameters) {
                    for (const auto& [pname, prop] : schema.properties) {
                        if (iequals(pname, param.name))
                            bindings.push_back({pname, param.name});
                    }
                    if (iequals(param.name, sname + "Id")) {
                        for (const auto& [pname, prop] : schema.properties) {
                            if (iequals(pname, "id")) bindings.push_back({pname, param.name});
                        }
                    }
                }
                // A non-create operation taking the schema as its request
                // body consumes an existing object of it; a create's body
                // is the blueprint for a new one, not a dependency.
                if (op.request_body_schema && *op.request_body_schema == sname &&
                    crud_kind(op) != CrudKind::Create) {
                    for (const auto& [pname, prop] : schema.properties)
                        bindings.push_back({pname, pname});
                }
                if (!bindings.empty())
                    rpg.add_consumes_edge(sname, op.operation_id, std::move(bindings));
            }
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                rpg.add_endpoint_edge(ids[i], ids[j]);
        }
    }

    // Candidate equivalence: schema pairs touching a common operation.
    std::map<std::string, std::set<std::string>> touched;  // operation -> schemas
    for (const auto& e : rpg.produces_edges()) touched[e.from].insert(e.to);
    for (const auto& e : rpg.consumes_edges()) touched[e.to].insert(e.from);
    for (const auto& [op, schemas] : touched) {
        for (auto a = schemas.begin(); a != schemas.end(); ++a) {
            for (auto b = std::next(a); b != schemas.end(); ++b)
                rpg.add_equivalence_candidate(*a, *b);
        }
    }

    rpg.validate();
    return rpg;
}

std::string Rpg::to_dot() const {
    std::ostringstream out;
    out << "digraph rpg {\n";
    out << "  rankdir=LR;\n";
    for (const auto& [name, node] : schema_nodes_) {
        out << "  \"s:" << name << "\" [label=\"" << name << "\", shape=box];\n";
    }
    for (const auto& [id, node] : operation_nodes_) {
        out << "  \"o:" << id << "\" [label=\"" << id << "\\n" << to_string(node.crud)
            << "\", shape=ellipse];\n";
    }
    for (const auto& e : produces_) {
        out << "  \"o:" << e.from << "\" -> \"s:" << e.to << "\"";
        if (e.origin == EdgeOrigin::Inferred) out << " [style=bold]";
        out << ";\n";
    }
    for (const auto& e : consumes_) {
        out << "  \"s:" << e.from << "\" -> \"o:" << e.to << "\" [label=\"";
        for (std::size_t i = 0; i < e.label.size(); ++i) {
            if (i) out << ", ";
            out << e.label[i].property << "->" << e.label[i].parameter;
        }
        out << "\"";
        if (e.status == ConsumesStatus::Infeasible) out << ", color=red";
        out << "];\n";
    }
    for (const auto& e : equivalence_) {
        out << "  \"s:" << e.first << "\" -> \"s:" << e.second
            << "\" [dir=none, style=dashed, label=\"";
        for (std::size_t i = 0; i < e.label.size(); ++i) {
            if (i) out << ", ";
            out << e.label[i].first_property << "=" << e.label[i].second_property;
        }
        out << (e.state == EquivalenceState::Candidate ? "?" : "") << "\"];\n";
    }
    for (const auto& e : endpoint_) {
        out << "  \"o:" << e.first << "\" -> \"o:" << e.second << "\" [dir=none];\n";
    }
    out << "}\n";
    return out.str();
}

std::string Rpg::to_json() const {
    Json doc;
    doc["version"] = 1;
    doc["schemas"] = Json::array();
    for (const auto& [name, node] : schema_nodes_) {
        Json props = Json::array();
        for (const auto& [pname, prop] : node.properties_attr.properties) {
            props.push_back({{"name", pname}, {"type", to_string(prop.type)}});
        }
        doc["schemas"].push_back({{"name", name}, {"properties", props}});
    }
    doc["operations"] = Json::array();
    for (const auto& [id, node] : operation_nodes_) {
        doc["operations"].push_back(
            {{"id", id}, {"crud", to_string(node.crud)}, {"path", node.path}});
    }
    Json produces = Json::array();
    for (const auto& e : produces_) {
        produces.push_back({{"from", e.from},
                            {"to", e.to},
                            {"origin", e.origin == EdgeOrigin::Spec ? "spec" : "inferred"}});
    }
    Json consumes = Json::array();
    for (const auto& e : consumes_) {
        Json label = Json::array();
        for (const auto& b : e.label) label.push_back({b.property, b.parameter});
        consumes.push_back({{"from", e.from},
                            {"to", e.to},
                            {"label", label},
                            {"status",
                             e.status == ConsumesStatus::Active ? "active" : "infeasible"},
                            {"consecutive_failures", e.consecutive_failures}});
    }
    Json equivalence = Json::array();
    for (const auto& e : equivalence_) {
        Json label = Json::array();
        for (const auto& t : e.label) label.push_back({t.first_property, t.second_property});
        equivalence.push_back(
            {{"a", e.first},
             {"b", e.second},
             {"state", e.state == EquivalenceState::Candidate ? "candidate" : "confirmed"},
             {"label", label}});
    }
    Json endpoint = Json::array();
    for (const auto& e : endpoint_) endpoint.push_back({e.first, e.second});
    doc["edges"] = {{"produces", produces},
                    {"consumes", consumes},
                    {"equivalence", equivalence},
                    {"endpoint", endpoint}};
    return doc.dump(2);
}

}  // namespace rpgfuzz
