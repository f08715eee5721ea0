#include "rpgfuzz/param_gen.hpp"

#include <algorithm>
#include <sstream>

#include "rpgfuzz/errors.hpp"

namespace rpgfuzz {

namespace {

std::string url_encode(const std::string& value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

std::string json_to_plain(const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

Json random_scalar(ValueKind kind, Rng& rng) {
    switch (kind) {
        case ValueKind::Integer: return rng.int_in(0, 1000);
        case ValueKind::Number:
            return static_cast<double>(rng.int_in(0, 1000)) + rng.unit();
        case ValueKind::Boolean: return rng.coin();
        default: return rng.alnum_string(1, 16);
    }
}

std::optional<Json> spec_ranged_scalar(ValueKind kind, const Constraints& constraints,
                                       Rng& rng) {
    if (!constraints.enum_values.empty()) return Json(rng.pick(constraints.enum_values));
    if (constraints.minimum || constraints.maximum) {
        const std::int64_t lo = constraints.minimum.value_or(0);
        const std::int64_t hi = constraints.maximum.value_or(lo + 1000);
        if (kind == ValueKind::Number)
            return static_cast<double>(rng.int_in(lo, hi));
        return rng.int_in(lo, hi);
    }
    return std::nullopt;
}

// Reuse, declared range, then random -- shared by parameters and body
// scalars.
Json scalar_value(ValueKind kind, const Constraints& constraints, const Json* reuse,
                  ValuePool& pool, const StrategyConfig& strategy) {
    if (reuse && !reuse->is_null() && pool.rng.chance(strategy.p_reuse)) return *reuse;
    if (auto ranged = spec_ranged_scalar(kind, constraints, pool.rng)) {
        if (pool.rng.chance(strategy.p_spec)) return *ranged;
    }
    return random_scalar(kind, pool.rng);
}

const Json* object_view(const Json& body) {
    if (body.is_object()) return &body;
    if (body.is_array() && !body.empty() && body.front().is_object()) return &body.front();
    return nullptr;
}

}  // namespace

std::string ConcreteRequest::url_with_query() const {
    if (query.empty()) return url;
    std::string out = url;
    char sep = '?';
    for (const auto& [k, v] : query) {
        out += sep;
        out += url_encode(k);
        out += '=';
        out += url_encode(v);
        sep = '&';
    }
    return out;
}

std::map<std::string, BoundValue> bind_from_response(const std::string& op, const Rpg& rpg,
                                                     const BindingContext& ctx) {
    std::map<std::string, BoundValue> out;
    const auto* node = rpg.operation_node(op);
    if (!node) return out;

    for (const auto& param : node->parameters) {
        if (out.count(param.name)) continue;
        bool found = false;
        for (auto it = ctx.prior_responses.rbegin(); it != ctx.prior_responses.rend() && !found;
             ++it) {
            const Json* object = object_view(it->body);
            if (!object) continue;
            for (const auto& schema : rpg.produced_schemas(it->operation_id)) {
                // Direct route: the response schema itself feeds the
                // parameter through an active consumes edge.
                if (const auto* edge = rpg.find_consumes(schema, op);
                    edge && edge->status == ConsumesStatus::Active) {
                    for (const auto& binding : edge->label) {
                        if (binding.parameter != param.name) continue;
                        if (!object->contains(binding.property)) continue;
                        out[param.name] = {(*object)[binding.property], edge->key()};
                        found = true;
                        break;
                    }
                }
                if (found) break;
                // Equivalence route: a sibling schema feeds the parameter
                // and a confirmed tuple names the property to read here.
                for (const auto& eq : rpg.equivalence_edges()) {
                    if (eq.state != EquivalenceState::Confirmed) continue;
                    if (eq.first != schema && eq.second != schema) continue;
                    const std::string& sibling = eq.first == schema ? eq.second : eq.first;
                    const auto* edge = rpg.find_consumes(sibling, op);
                    if (!edge || edge->status != ConsumesStatus::Active) continue;
                    for (const auto& binding : edge->label) {
                        if (binding.parameter != param.name) continue;
                        for (const auto& tuple : eq.label) {
                            const std::string& sibling_prop =
                                eq.first == sibling ? tuple.first_property : tuple.second_property;
                            const std::string& local_prop =
                                eq.first == sibling ? tuple.second_property : tuple.first_property;
                            if (sibling_prop != binding.property) continue;
                            if (!object->contains(local_prop)) continue;
                            out[param.name] = {(*object)[local_prop], edge->key()};
                            found = true;
                            break;
                        }
                        if (found) break;
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
    }
    return out;
}

Json value_for_schema(const SchemaDef& schema, const ServiceSpec& spec, ValuePool& pool,
                      const StrategyConfig& strategy, int depth_limit,
                      const Json* reuse_source) {
    Json out = Json::object();
    for (const auto& [pname, prop] : schema.properties) {
        const Json* reuse = nullptr;
        if (reuse_source && reuse_source->is_object() && reuse_source->contains(pname))
            reuse = &(*reuse_source)[pname];
        switch (prop.type) {
            case ValueKind::ObjectRef: {
                if (depth_limit <= 0) break;  // truncate: nested object absent
                if (const auto* nested = prop.nested ? spec.find_schema(*prop.nested) : nullptr) {
                    out[pname] =
                        value_for_schema(*nested, spec, pool, strategy, depth_limit - 1, reuse);
                }
                break;
            }
            case ValueKind::ArrayOf: {
                if (depth_limit <= 0) break;
                Json arr = Json::array();
                if (const auto* nested = prop.nested ? spec.find_schema(*prop.nested) : nullptr) {
                    arr.push_back(
                        value_for_schema(*nested, spec, pool, strategy, depth_limit - 1, nullptr));
                } else {
                    arr.push_back(random_scalar(ValueKind::String, pool.rng));
                }
                out[pname] = std::move(arr);
                break;
            }
            default:
                out[pname] = scalar_value(prop.type, prop.constraints, reuse, pool, strategy);
                break;
        }
    }
    return out;
}

BuiltRequest next_request(const std::string& op, const Rpg& rpg, const ServiceSpec& spec,
                          const BindingContext& ctx, ValuePool& pool,
                          const StrategyConfig& strategy) {
    const auto* node = rpg.operation_node(op);
    if (!node) throw UnknownNodeError("unknown operation " + op);

    BuiltRequest built;
    built.request.method = [&] {
        switch (node->crud) {
            case CrudKind::Create: return HttpMethod::Post;
            case CrudKind::Read: return HttpMethod::Get;
            case CrudKind::Update: return HttpMethod::Put;
            case CrudKind::Delete: return HttpMethod::Delete;
        }
        return HttpMethod::Get;
    }();

    const auto bound = bind_from_response(op, rpg, ctx);
    const auto* last = [&]() -> const ValuePool::SuccessRecord* {
        auto it = pool.last_success.find(op);
        return it == pool.last_success.end() ? nullptr : &it->second;
    }();

    Json body_fields = Json::object();
    for (const auto& param : node->parameters) {
        Json value;
        if (auto it = bound.find(param.name); it != bound.end()) {
            value = it->second.value;
            built.bound_edges.push_back(it->second.edge);
            built.bindings_used = true;
        } else if (param.type == ValueKind::ObjectRef || param.type == ValueKind::ArrayOf) {
            if (param.type == ValueKind::ObjectRef && param.schema_ref) {
                const auto* nested = spec.find_schema(*param.schema_ref);
                if (!nested) throw UnknownSchemaError("parameter schema " + *param.schema_ref);
                value = value_for_schema(*nested, spec, pool, strategy,
                                         strategy.value_depth_limit, nullptr);
            } else if (param.location == ParamLocation::Path) {
                throw UnboundRequiredPathParamError("no value source for path parameter " +
                                                    param.name + " of " + op);
            } else {
                value = Json::array();
            }
        } else {
            const Json* reuse = nullptr;
            if (last) {
                auto it = last->parameters.find(param.name);
                if (it != last->parameters.end()) reuse = &it->second;
            }
            value = scalar_value(param.type, param.constraints, reuse, pool, strategy);
        }
        built.parameter_values[param.name] = value;
        switch (param.location) {
            case ParamLocation::Query:
                built.request.query[param.name] = json_to_plain(value);
                break;
            case ParamLocation::BodyField: body_fields[param.name] = value; break;
            case ParamLocation::Path: break;  // substituted below
        }
    }

    // Substitute path template segments.
    std::string url = spec.base_path + node->path;
    for (const auto& param : node->parameters) {
        if (param.location != ParamLocation::Path) continue;
        const std::string placeholder = "{" + param.name + "}";
        auto pos = url.find(placeholder);
        if (pos == std::string::npos) continue;
        url.replace(pos, placeholder.size(),
                    url_encode(json_to_plain(built.parameter_values[param.name])));
    }
    if (url.find('{') != std::string::npos) {
        throw UnboundRequiredPathParamError("unsubstituted placeholder left in " + url +
                                            " for operation " + op);
    }
    built.request.url = std::move(url);

    if (node->request_body_schema) {
        const auto* body_schema = spec.find_schema(*node->request_body_schema);
        if (!body_schema)
            throw UnknownSchemaError("body schema " + *node->request_body_schema);
        const Json* reuse = last && !last->body.is_null() ? &last->body : nullptr;
        Json body =
            value_for_schema(*body_schema, spec, pool, strategy, strategy.value_depth_limit,
                             reuse);
        for (auto& [k, v] : body_fields.items()) body[k] = v;
        built.request.body = std::move(body);
    } else if (!body_fields.empty()) {
        built.request.body = std::move(body_fields);
    }
    if (built.request.body) built.request.headers["Content-Type"] = "application/json";
    return built;
}

}  // namespace rpgfuzz
