#include "rpgfuzz/spec_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

namespace rpgfuzz {

using Json = nlohmann::json;

std::string to_string(HttpMethod m) {
    switch (m) {
        case HttpMethod::Post: return "POST";
        case HttpMethod::Get: return "GET";
        case HttpMethod::Put: return "PUT";
        case HttpMethod::Delete: return "DELETE";
        case HttpMethod::Patch: return "PATCH";
        case HttpMethod::Head: return "HEAD";
        case HttpMethod::Options: return "OPTIONS";
    }
    return "GET";
}

std::string to_string(CrudKind k) {
    switch (k) {
        case CrudKind::Create: return "create";
        case CrudKind::Read: return "read";
        case CrudKind::Update: return "update";
        case CrudKind::Delete: return "delete";
    }
    return "read";
}

std::string to_string(ParamLocation loc) {
    switch (loc) {
        case ParamLocation::Path: return "path";
        case ParamLocation::Query: return "query";
        case ParamLocation::BodyField: return "body-field";
    }
    return "query";
}

std::string to_string(ValueKind k) {
    switch (k) {
        case ValueKind::String: return "string";
        case ValueKind::Integer: return "integer";
        case ValueKind::Number: return "number";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::ObjectRef: return "object-ref";
        case ValueKind::ArrayOf: return "array-of";
    }
    return "string";
}

CrudKind crud_kind(HttpMethod m) {
    switch (m) {
        case HttpMethod::Post: return CrudKind::Create;
        case HttpMethod::Get: return CrudKind::Read;
        case HttpMethod::Put: return CrudKind::Update;
        case HttpMethod::Delete: return CrudKind::Delete;
        default:
            throw UnsupportedMethodError("no CRUD mapping for HTTP method " + to_string(m));
    }
}

CrudKind crud_kind(const OperationDef& op) { return crud_kind(op.method); }

const OperationDef* ServiceSpec::find_operation(const std::string& operation_id) const {
    for (const auto& ep : endpoints) {
        for (const auto& op : ep.operations) {
            if (op.operation_id == operation_id) return &op;
        }
    }
    return nullptr;
}

const SchemaDef* ServiceSpec::find_schema(const std::string& name) const {
    auto it = schemas.find(name);
    return it == schemas.end() ? nullptr : &it->second;
}

std::vector<const OperationDef*> ServiceSpec::operations() const {
    std::vector<const OperationDef*> out;
    for (const auto& ep : endpoints) {
        for (const auto& op : ep.operations) out.push_back(&op);
    }
    return out;
}

std::size_t ServiceSpec::operation_count() const {
    std::size_t n = 0;
    for (const auto& ep : endpoints) n += ep.operations.size();
    return n;
}

bool ServiceSpec::structurally_equal(const ServiceSpec& other) const {
    return title == other.title && version == other.version && base_path == other.base_path &&
           endpoints == other.endpoints && schemas == other.schemas;
}

namespace {

// yaml-cpp leaves scalars untyped; recover JSON types with the usual
// conservative heuristics (quoted scalars stay strings).
Json yaml_scalar_to_json(const YAML::Node& node) {
    if (node.Tag() == "!") return node.Scalar();  // explicitly quoted
    const std::string& s = node.Scalar();
    if (s == "null" || s == "~" || s.empty()) return nullptr;
    if (s == "true") return true;
    if (s == "false") return false;
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) {
        try {
            std::size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos == s.size()) return v;
        } catch (...) {
        }
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (...) {
        }
    }
    return s;
}

Json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null: return nullptr;
        case YAML::NodeType::Scalar: return yaml_scalar_to_json(node);
        case YAML::NodeType::Sequence: {
            Json arr = Json::array();
            for (const auto& item : node) arr.push_back(yaml_to_json(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            Json obj = Json::object();
            for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return obj;
        }
        default: return nullptr;
    }
}

const char* const kMethodOrder[] = {"post", "get", "put", "delete", "patch", "head", "options"};

std::optional<HttpMethod> method_from_key(const std::string& key) {
    if (key == "post") return HttpMethod::Post;
    if (key == "get") return HttpMethod::Get;
    if (key == "put") return HttpMethod::Put;
    if (key == "delete") return HttpMethod::Delete;
    if (key == "patch") return HttpMethod::Patch;
    if (key == "head") return HttpMethod::Head;
    if (key == "options") return HttpMethod::Options;
    return std::nullopt;
}

bool is_supported_method(HttpMethod m) {
    return m == HttpMethod::Post || m == HttpMethod::Get || m == HttpMethod::Put ||
           m == HttpMethod::Delete;
}

std::string path_slug(const std::string& path) {
    std::string out;
    for (char c : path) {
        if (c == '/' ) {
            if (!out.empty() && out.back() != '_') out.push_back('_');
        } else if (c != '{' && c != '}') {
            out.push_back(c);
        }
    }
    return out;
}

class Normalizer {
public:
    ServiceSpec normalize(const Json& doc) {
        detect_version(doc);
        if (doc.contains("info") && doc["info"].is_object()) {
            const auto& info = doc["info"];
            if (info.contains("title") && info["title"].is_string()) spec_.title = info["title"];
            if (info.contains("version") && info["version"].is_string())
                spec_.version = info["version"];
        }
        extract_base_path(doc);
        collect_named_schemas(doc);
        parse_paths(doc);
        resolve_and_check();
        return std::move(spec_);
    }

private:
    void detect_version(const Json& doc) {
        if (!doc.is_object()) throw ParseError("document root is not an object");
        if (doc.contains("swagger")) {
            const std::string v = doc["swagger"].is_string() ? doc["swagger"].get<std::string>()
                                                             : doc["swagger"].dump();
            if (v.rfind("2.", 0) != 0)
                throw UnsupportedVersionError("unsupported swagger version " + v);
            v2_ = true;
            return;
        }
        if (doc.contains("openapi")) {
            const std::string v = doc["openapi"].is_string() ? doc["openapi"].get<std::string>()
                                                             : doc["openapi"].dump();
            if (v.rfind("3.", 0) != 0)
                throw UnsupportedVersionError("unsupported openapi version " + v);
            v2_ = false;
            return;
        }
        throw UnsupportedVersionError("document declares neither swagger 2.x nor openapi 3.x");
    }

    void extract_base_path(const Json& doc) {
        if (v2_) {
            if (doc.contains("basePath") && doc["basePath"].is_string())
                spec_.base_path = doc["basePath"];
            return;
        }
        if (doc.contains("servers") && doc["servers"].is_array() && !doc["servers"].empty()) {
            const auto& first = doc["servers"][0];
            if (first.contains("url") && first["url"].is_string()) {
                std::string url = first["url"];
                auto scheme = url.find("://");
                if (scheme != std::string::npos) {
                    auto slash = url.find('/', scheme + 3);
                    url = slash == std::string::npos ? "" : url.substr(slash);
                }
                if (url == "/") url.clear();
                spec_.base_path = url;
            }
        }
    }

    void collect_named_schemas(const Json& doc) {
        const Json* container = nullptr;
        if (v2_) {
            if (doc.contains("definitions")) container = &doc["definitions"];
        } else if (doc.contains("components") && doc["components"].is_object() &&
                   doc["components"].contains("schemas")) {
            container = &doc["components"]["schemas"];
        }
        if (!container || !container->is_object()) return;
        for (const auto& [name, raw] : container->items()) raw_schemas_[name] = raw;
        for (const auto& [name, raw] : raw_schemas_) register_schema(name, raw);
    }

    // Converts one schema object into a SchemaDef under the given name,
    // flattening allOf by property union and taking the first oneOf/anyOf
    // variant. Safe to call more than once per name.
    void register_schema(const std::string& name, Json raw) {
        if (spec_.schemas.count(name)) return;
        spec_.schemas[name] = SchemaDef{name, {}};  // placeholder breaks ref cycles

        if (raw.contains("allOf") && raw["allOf"].is_array()) {
            Json merged = raw;
            merged.erase("allOf");
            for (const auto& part : raw["allOf"]) {
                Json resolved = part;
                if (part.contains("$ref")) {
                    const std::string target = ref_target(part["$ref"]);
                    auto it = raw_schemas_.find(target);
                    if (it == raw_schemas_.end())
                        throw UnresolvedRefError("allOf $ref to unknown schema " + target);
                    resolved = it->second;
                }
                if (resolved.contains("properties")) {
                    for (const auto& [pname, pval] : resolved["properties"].items()) {
                        if (!merged.contains("properties")) merged["properties"] = Json::object();
                        if (!merged["properties"].contains(pname))
                            merged["properties"][pname] = pval;
                    }
                }
                if (resolved.contains("required")) {
                    for (const auto& r : resolved["required"]) {
                        if (!merged.contains("required")) merged["required"] = Json::array();
                        merged["required"].push_back(r);
                    }
                }
            }
            spec_.diagnostics.push_back("schema " + name + ": allOf flattened by property union");
            raw = std::move(merged);
        }
        for (const char* key : {"oneOf", "anyOf"}) {
            if (raw.contains(key) && raw[key].is_array() && !raw[key].empty()) {
                spec_.diagnostics.push_back("schema " + name + ": " + key +
                                            " reduced to its first variant");
                Json first = raw[key][0];
                if (first.contains("$ref")) {
                    const std::string target = ref_target(first["$ref"]);
                    auto it = raw_schemas_.find(target);
                    if (it == raw_schemas_.end())
                        throw UnresolvedRefError(std::string(key) + " $ref to unknown schema " +
                                                 target);
                    first = it->second;
                }
                raw = first;
            }
        }

        SchemaDef def{name, {}};
        std::set<std::string> required;
        if (raw.contains("required") && raw["required"].is_array()) {
            for (const auto& r : raw["required"]) {
                if (r.is_string()) required.insert(r.get<std::string>());
            }
        }
        if (raw.contains("properties") && raw["properties"].is_object()) {
            for (const auto& [pname, pval] : raw["properties"].items()) {
                PropertyDef prop = convert_property(name, pname, pval);
                prop.required = required.count(pname) > 0;
                def.properties[pname] = std::move(prop);
            }
        }
        spec_.schemas[name] = std::move(def);
    }

    PropertyDef convert_property(const std::string& schema_name, const std::string& pname,
                                 const Json& raw) {
        PropertyDef prop;
        prop.name = pname;
        if (raw.contains("$ref")) {
            prop.type = ValueKind::ObjectRef;
            prop.nested = ref_target(raw["$ref"]);
            pending_refs_.insert(*prop.nested);
            return prop;
        }
        const std::string type =
            raw.contains("type") && raw["type"].is_string() ? raw["type"].get<std::string>() : "";
        if (type == "array") {
            prop.type = ValueKind::ArrayOf;
            if (raw.contains("items")) {
                const auto& items = raw["items"];
                if (items.contains("$ref")) {
                    prop.nested = ref_target(items["$ref"]);
                    pending_refs_.insert(*prop.nested);
                } else if (items.contains("properties")) {
                    const std::string synth = schema_name + "_" + pname + "_inline";
                    register_schema(synth, items);
                    prop.nested = synth;
                }
            }
            return prop;
        }
        if (type == "object" || raw.contains("properties")) {
            const std::string synth = schema_name + "_" + pname + "_inline";
            register_schema(synth, raw);
            prop.type = ValueKind::ObjectRef;
            prop.nested = synth;
            return prop;
        }
        prop.type = scalar_kind(type);
        prop.constraints = convert_constraints(raw);
        return prop;
    }

    static ValueKind scalar_kind(const std::string& type) {
        if (type == "integer") return ValueKind::Integer;
        if (type == "number") return ValueKind::Number;
        if (type == "boolean") return ValueKind::Boolean;
        return ValueKind::String;
    }

    static Constraints convert_constraints(const Json& raw) {
        Constraints c;
        if (raw.contains("enum") && raw["enum"].is_array()) {
            for (const auto& v : raw["enum"]) {
                c.enum_values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        }
        if (raw.contains("minimum") && raw["minimum"].is_number())
            c.minimum = raw["minimum"].get<std::int64_t>();
        if (raw.contains("maximum") && raw["maximum"].is_number())
            c.maximum = raw["maximum"].get<std::int64_t>();
        return c;
    }

    std::string ref_target(const Json& ref) {
        if (!ref.is_string()) throw ParseError("$ref is not a string");
        const std::string text = ref.get<std::string>();
        for (const char* prefix : {"#/definitions/", "#/components/schemas/"}) {
            if (text.rfind(prefix, 0) == 0) return text.substr(std::string(prefix).size());
        }
        throw UnresolvedRefError("unsupported $ref target " + text);
    }

    void parse_paths(const Json& doc) {
        if (!doc.contains("paths") || !doc["paths"].is_object()) return;
        std::set<std::string> seen_paths;
        for (const auto& [path, item] : doc["paths"].items()) {
            if (!seen_paths.insert(path).second) throw ParseError("duplicate path " + path);
            EndpointDef endpoint;
            endpoint.path = path;
            std::vector<Json> shared_params;
            if (item.contains("parameters") && item["parameters"].is_array()) {
                for (const auto& p : item["parameters"]) shared_params.push_back(p);
            }
            for (const char* method_key : kMethodOrder) {
                if (!item.contains(method_key)) continue;
                endpoint.operations.push_back(
                    parse_operation(path, *method_from_key(method_key), item[method_key],
                                    shared_params));
            }
            spec_.endpoints.push_back(std::move(endpoint));
        }
    }

    OperationDef parse_operation(const std::string& path, HttpMethod method, const Json& raw,
                                 const std::vector<Json>& shared_params) {
        OperationDef op;
        op.method = method;
        op.path = path;
        op.supported = is_supported_method(method);
        if (raw.contains("operationId") && raw["operationId"].is_string()) {
            op.operation_id = raw["operationId"];
        } else {
            std::string key = to_string(method);
            std::transform(key.begin(), key.end(), key.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            op.operation_id = key + "_" + path_slug(path);
        }
        if (!op.supported) {
            spec_.diagnostics.push_back("operation " + op.operation_id + " uses " +
                                        to_string(method) +
                                        "; loaded but excluded from graph construction");
        }

        std::vector<Json> params = shared_params;
        if (raw.contains("parameters") && raw["parameters"].is_array()) {
            for (const auto& p : raw["parameters"]) params.push_back(p);
        }
        for (const auto& p : params) parse_parameter(op, p);

        if (!v2_ && raw.contains("requestBody")) {
            const auto& body = raw["requestBody"];
            if (body.contains("content")) {
                if (const Json* schema = pick_media_schema(body["content"])) {
                    op.request_body_schema = schema_ref_or_synth(*schema, op.operation_id, "body");
                }
            }
        }

        if (raw.contains("responses") && raw["responses"].is_object()) {
            for (const auto& [code, resp] : raw["responses"].items()) {
                op.responses[code] = parse_response(op.operation_id, code, resp);
            }
        }
        return op;
    }

    void parse_parameter(OperationDef& op, const Json& raw) {
        if (!raw.is_object()) return;
        const std::string in =
            raw.contains("in") && raw["in"].is_string() ? raw["in"].get<std::string>() : "";
        if (in == "header" || in == "cookie") return;  // not modeled
        if (in == "body") {
            if (raw.contains("schema")) {
                op.request_body_schema =
                    schema_ref_or_synth(raw["schema"], op.operation_id, "body");
            }
            return;
        }
        ParameterDef param;
        param.name = raw.contains("name") && raw["name"].is_string()
                         ? raw["name"].get<std::string>()
                         : "";
        if (param.name.empty()) return;
        if (in == "path") {
            param.location = ParamLocation::Path;
        } else if (in == "formData") {
            param.location = ParamLocation::BodyField;
        } else {
            param.location = ParamLocation::Query;
        }
        param.required = raw.contains("required") && raw["required"].is_boolean()
                             ? raw["required"].get<bool>()
                             : false;
        if (param.location == ParamLocation::Path) param.required = true;

        const Json& type_src = (!v2_ && raw.contains("schema")) ? raw["schema"] : raw;
        if (type_src.contains("$ref")) {
            param.type = ValueKind::ObjectRef;
            param.schema_ref = ref_target(type_src["$ref"]);
            pending_refs_.insert(*param.schema_ref);
        } else {
            const std::string type = type_src.contains("type") && type_src["type"].is_string()
                                         ? type_src["type"].get<std::string>()
                                         : "";
            if (type == "array") {
                param.type = ValueKind::ArrayOf;
                if (type_src.contains("items")) {
                    const auto& items = type_src["items"];
                    if (items.contains("$ref")) {
                        param.schema_ref = ref_target(items["$ref"]);
                        pending_refs_.insert(*param.schema_ref);
                    } else {
                        param.constraints = convert_constraints(items);
                    }
                }
            } else {
                param.type = scalar_kind(type);
                param.constraints = convert_constraints(type_src);
            }
        }
        op.parameters.push_back(std::move(param));
    }

    ResponseDef parse_response(const std::string& op_id, const std::string& code,
                               const Json& raw) {
        ResponseDef def;
        const Json* schema = nullptr;
        if (v2_) {
            if (raw.contains("schema")) schema = &raw["schema"];
        } else if (raw.contains("content")) {
            schema = pick_media_schema(raw["content"]);
        }
        if (!schema) return def;
        Json s = *schema;
        if (s.contains("type") && s["type"] == "array") {
            def.is_array = true;
            if (s.contains("items")) s = s["items"];
        }
        def.schema_name = schema_ref_or_synth(s, op_id, "response_" + code);
        return def;
    }

    const Json* pick_media_schema(const Json& content) {
        if (!content.is_object() || content.empty()) return nullptr;
        if (content.contains("application/json") &&
            content["application/json"].contains("schema")) {
            return &content["application/json"]["schema"];
        }
        for (const auto& [mime, media] : content.items()) {
            if (media.contains("schema")) return &media["schema"];
        }
        return nullptr;
    }

    std::string schema_ref_or_synth(const Json& schema, const std::string& op_id,
                                    const std::string& location) {
        if (schema.contains("$ref")) {
            const std::string target = ref_target(schema["$ref"]);
            pending_refs_.insert(target);
            return target;
        }
        // Array bodies reduce to their element schema.
        if (schema.contains("type") && schema["type"] == "array" && schema.contains("items") &&
            schema["items"].contains("$ref")) {
            const std::string target = ref_target(schema["items"]["$ref"]);
            pending_refs_.insert(target);
            return target;
        }
        int n = ++inline_counter_[op_id + "/" + location];
        const std::string synth = op_id + "_" + location + "_inline_" + std::to_string(n);
        register_schema(synth, schema);
        return synth;
    }

    void resolve_and_check() {
        for (const auto& ref : pending_refs_) {
            if (!spec_.schemas.count(ref))
                throw UnresolvedRefError("$ref to unknown schema " + ref);
        }
        std::set<std::string> ids;
        for (const auto& ep : spec_.endpoints) {
            std::set<std::string> methods;
            for (const auto& op : ep.operations) {
                if (!ids.insert(op.operation_id).second)
                    throw ParseError("duplicate operationId " + op.operation_id);
                if (!methods.insert(to_string(op.method)).second)
                    throw ParseError("duplicate method on path " + ep.path);
                for (const auto& resp : op.responses) {
                    if (resp.second.schema_name && !spec_.schemas.count(*resp.second.schema_name))
                        throw UnresolvedRefError("response schema " + *resp.second.schema_name +
                                                 " missing after resolution");
                }
                if (op.request_body_schema && !spec_.schemas.count(*op.request_body_schema))
                    throw UnresolvedRefError("body schema " + *op.request_body_schema +
                                             " missing after resolution");
            }
        }
        for (const auto& [name, schema] : spec_.schemas) {
            for (const auto& [pname, prop] : schema.properties) {
                if (prop.nested && !spec_.schemas.count(*prop.nested))
                    throw UnresolvedRefError("property " + name + "." + pname +
                                             " references unknown schema " + *prop.nested);
            }
        }
    }

    ServiceSpec spec_;
    std::map<std::string, Json> raw_schemas_;
    std::set<std::string> pending_refs_;
    std::map<std::string, int> inline_counter_;
    bool v2_ = false;
};

}  // namespace

ServiceSpec parse_spec(const std::string& document, SpecFormat format) {
    Json doc;
    bool treat_as_json = format == SpecFormat::Json;
    if (format == SpecFormat::Auto) {
        auto first = document.find_first_not_of(" \t\r\n");
        treat_as_json = first != std::string::npos && document[first] == '{';
    }
    if (treat_as_json) {
        try {
            doc = Json::parse(document);
        } catch (const Json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what());
        }
    } else {
        try {
            doc = yaml_to_json(YAML::Load(document));
        } catch (const YAML::Exception& e) {
            throw ParseError(std::string("malformed YAML: ") + e.what());
        }
    }
    return Normalizer{}.normalize(doc);
}

ServiceSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open spec file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto format = SpecFormat::Auto;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") format = SpecFormat::Json;
    return parse_spec(buf.str(), format);
}

namespace {

Json property_to_json(const PropertyDef& prop) {
    Json out = Json::object();
    switch (prop.type) {
        case ValueKind::ObjectRef:
            if (prop.nested) return Json{{"$ref", "#/components/schemas/" + *prop.nested}};
            out["type"] = "object";
            return out;
        case ValueKind::ArrayOf:
            out["type"] = "array";
            if (prop.nested)
                out["items"] = Json{{"$ref", "#/components/schemas/" + *prop.nested}};
            else
                out["items"] = Json{{"type", "string"}};
            return out;
        default: out["type"] = to_string(prop.type); break;
    }
    if (!prop.constraints.enum_values.empty()) out["enum"] = prop.constraints.enum_values;
    if (prop.constraints.minimum) out["minimum"] = *prop.constraints.minimum;
    if (prop.constraints.maximum) out["maximum"] = *prop.constraints.maximum;
    return out;
}

}  // namespace

std::string serialize_spec(const ServiceSpec& spec) {
    Json doc;
    doc["openapi"] = "3.0.0";
    doc["info"] = {{"title", spec.title}, {"version", spec.version}};
    if (!spec.base_path.empty()) doc["servers"] = Json::array({{{"url", spec.base_path}}});

    Json paths = Json::object();
    for (const auto& ep : spec.endpoints) {
        Json item = Json::object();
        for (const auto& op : ep.operations) {
            Json raw = Json::object();
            raw["operationId"] = op.operation_id;
            if (!op.parameters.empty()) {
                Json params = Json::array();
                for (const auto& p : op.parameters) {
                    Json pj = Json::object();
                    pj["name"] = p.name;
                    // "formData" is a 2.x construct; parse_spec accepts it
                    // back so body-field parameters survive the round trip.
                    pj["in"] = p.location == ParamLocation::Path    ? "path"
                               : p.location == ParamLocation::Query ? "query"
                                                                    : "formData";
                    pj["required"] = p.required;
                    Json schema = Json::object();
                    if (p.type == ValueKind::ObjectRef && p.schema_ref) {
                        schema["$ref"] = "#/components/schemas/" + *p.schema_ref;
                    } else if (p.type == ValueKind::ArrayOf) {
                        schema["type"] = "array";
                        if (p.schema_ref)
                            schema["items"] = {
                                {"$ref", "#/components/schemas/" + *p.schema_ref}};
                        else {
                            Json items = Json{{"type", "string"}};
                            if (!p.constraints.enum_values.empty())
                                items["enum"] = p.constraints.enum_values;
                            schema["items"] = items;
                        }
                    } else {
                        schema["type"] = to_string(p.type);
                        if (!p.constraints.enum_values.empty())
                            schema["enum"] = p.constraints.enum_values;
                        if (p.constraints.minimum) schema["minimum"] = *p.constraints.minimum;
                        if (p.constraints.maximum) schema["maximum"] = *p.constraints.maximum;
                    }
                    pj["schema"] = schema;
                    params.push_back(pj);
                }
                raw["parameters"] = params;
            }
            if (op.request_body_schema) {
                raw["requestBody"] = {
                    {"content",
                     {{"application/json",
                       {{"schema",
                         {{"$ref", "#/components/schemas/" + *op.request_body_schema}}}}}}}};
            }
            Json responses = Json::object();
            for (const auto& [code, resp] : op.responses) {
                Json rj = Json{{"description", ""}};
                if (resp.schema_name) {
                    Json schema;
                    if (resp.is_array) {
                        schema = {{"type", "array"},
                                  {"items",
                                   {{"$ref", "#/components/schemas/" + *resp.schema_name}}}};
                    } else {
                        schema = {{"$ref", "#/components/schemas/" + *resp.schema_name}};
                    }
                    rj["content"] = {{"application/json", {{"schema", schema}}}};
                }
                responses[code] = rj;
            }
            raw["responses"] = responses;
            std::string key = to_string(op.method);
            std::transform(key.begin(), key.end(), key.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            item[key] = raw;
        }
        paths[ep.path] = item;
    }
    doc["paths"] = paths;

    Json schemas = Json::object();
    for (const auto& [name, schema] : spec.schemas) {
        Json sj = Json{{"type", "object"}};
        Json props = Json::object();
        Json required = Json::array();
        for (const auto& [pname, prop] : schema.properties) {
            props[pname] = property_to_json(prop);
            if (prop.required) required.push_back(pname);
        }
        if (!props.empty()) sj["properties"] = props;
        if (!required.empty()) sj["required"] = required;
        schemas[name] = sj;
    }
    doc["components"] = {{"schemas", schemas}};
    return doc.dump(2);
}

}  // namespace rpgfuzz
