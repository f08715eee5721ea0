#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpgfuzz/errors.hpp"

namespace rpgfuzz {

enum class HttpMethod { Post, Get, Put, Delete, Patch, Head, Options };

enum class CrudKind { Create, Read, Update, Delete };

enum class ParamLocation { Path, Query, BodyField };

enum class ValueKind { String, Integer, Number, Boolean, ObjectRef, ArrayOf };

std::string to_string(HttpMethod m);
std::string to_string(CrudKind k);
std::string to_string(ParamLocation loc);
std::string to_string(ValueKind k);

// Value-range / enum restrictions declared by the document.
struct Constraints {
    std::vector<std::string> enum_values;
    std::optional<std::int64_t> minimum;
    std::optional<std::int64_t> maximum;

    bool empty() const { return enum_values.empty() && !minimum && !maximum; }
    bool operator==(const Constraints&) const = default;
};

struct PropertyDef {
    std::string name;
    ValueKind type = ValueKind::String;
    Constraints constraints;
    std::optional<std::string> nested;  // schema name for ObjectRef / ArrayOf
    bool required = false;

    bool operator==(const PropertyDef&) const = default;
};

struct SchemaDef {
    std::string name;
    std::map<std::string, PropertyDef> properties;

    bool operator==(const SchemaDef&) const = default;
};

struct ParameterDef {
    std::string name;
    ParamLocation location = ParamLocation::Query;
    ValueKind type = ValueKind::String;
    std::optional<std::string> schema_ref;  // set when type is ObjectRef/ArrayOf
    bool required = false;
    Constraints constraints;

    bool operator==(const ParameterDef&) const = default;
};

struct ResponseDef {
    std::optional<std::string> schema_name;
    bool is_array = false;

    bool operator==(const ResponseDef&) const = default;
};

struct OperationDef {
    std::string operation_id;
    HttpMethod method = HttpMethod::Get;
    std::string path;  // owning endpoint's template, duplicated for convenience
    std::vector<ParameterDef> parameters;
    std::optional<std::string> request_body_schema;
    std::map<std::string, ResponseDef> responses;  // key: status code or "default"
    bool supported = true;  // false for methods outside the four CRUD verbs

    bool operator==(const OperationDef&) const = default;
};

struct EndpointDef {
    std::string path;
    std::vector<OperationDef> operations;

    bool operator==(const EndpointDef&) const = default;
};

struct ServiceSpec {
    std::string title;
    std::string version;
    std::string base_path;
    std::vector<EndpointDef> endpoints;
    std::map<std::string, SchemaDef> schemas;
    std::vector<std::string> diagnostics;  // non-fatal normalization notes

    const OperationDef* find_operation(const std::string& operation_id) const;
    const SchemaDef* find_schema(const std::string& name) const;
    std::vector<const OperationDef*> operations() const;
    std::size_t operation_count() const;

    bool structurally_equal(const ServiceSpec& other) const;
};

enum class SpecFormat { Yaml, Json, Auto };

// Parses an OpenAPI 2.x/3.x document into the normalized model. All $ref
// pointers are resolved to named schemas; anonymous inline schemas receive
// synthetic names of the form <operationId>_<location>_inline_<n>.
ServiceSpec parse_spec(const std::string& document, SpecFormat format = SpecFormat::Auto);

ServiceSpec parse_spec_file(const std::string& path);

// Emits the normalized model back out as an OpenAPI 3.0 JSON document.
// parse_spec(serialize_spec(s)) is structurally equal to s.
std::string serialize_spec(const ServiceSpec& spec);

CrudKind crud_kind(const OperationDef& op);
CrudKind crud_kind(HttpMethod m);

}  // namespace rpgfuzz
