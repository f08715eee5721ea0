#include "doctest.h"

#include "rpgfuzz/petstore_fixture.hpp"
#include "rpgfuzz/spec_model.hpp"

using namespace rpgfuzz;

namespace {

std::string data_path(const char* name) { return std::string(TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("bundled pet store document parses to the running-example shape") {
    const auto spec = parse_spec(petstore_spec_yaml());
    CHECK(spec.endpoints.size() == 5);
    CHECK(spec.operation_count() == 6);
    CHECK(spec.schemas.size() == 2);
    CHECK(spec.base_path == "/v2");

    for (const char* id : {"addPet", "getPetById", "findPetsByStatus", "placeOrder",
                           "getOrderById", "deleteOrder"}) {
        CAPTURE(id);
        CHECK(spec.find_operation(id) != nullptr);
    }

    const auto* add_pet = spec.find_operation("addPet");
    REQUIRE(add_pet != nullptr);
    CHECK(add_pet->request_body_schema == "Pet");
    CHECK(add_pet->responses.at("200").schema_name == std::nullopt);

    const auto* find_pets = spec.find_operation("findPetsByStatus");
    REQUIRE(find_pets != nullptr);
    REQUIRE(find_pets->parameters.size() == 1);
    CHECK(find_pets->parameters[0].location == ParamLocation::Query);
    CHECK(find_pets->parameters[0].constraints.enum_values ==
          std::vector<std::string>{"available", "pending", "sold"});
    CHECK(find_pets->responses.at("200").schema_name == "Pet");
    CHECK(find_pets->responses.at("200").is_array);

    const auto* get_pet = spec.find_operation("getPetById");
    REQUIRE(get_pet != nullptr);
    REQUIRE(get_pet->parameters.size() == 1);
    CHECK(get_pet->parameters[0].location == ParamLocation::Path);
    CHECK(get_pet->parameters[0].required);  // path parameters always are

    const auto& pet = spec.schemas.at("Pet");
    CHECK(pet.properties.size() == 3);
    CHECK(pet.properties.at("status").constraints.enum_values.size() == 3);
    CHECK(pet.properties.at("id").type == ValueKind::Integer);
    CHECK(pet.properties.at("id").required);
}

TEST_CASE("the swagger 2.0 form of the same document normalizes identically") {
    const auto v3 = parse_spec(petstore_spec_yaml());
    const auto v2 = parse_spec_file(data_path("petstore_v2.yaml"));
    CHECK(v3.structurally_equal(v2));
}

TEST_CASE("empty paths object gives an empty model") {
    const auto spec = parse_spec(R"({"openapi": "3.0.0", "info": {}, "paths": {}})",
                                 SpecFormat::Json);
    CHECK(spec.endpoints.empty());
    CHECK(spec.schemas.empty());
}

TEST_CASE("demo-scale document: 20 operations across 18 endpoints") {
    const auto spec = parse_spec_file(data_path("petstore_full.json"));
    CHECK(spec.endpoints.size() == 18);
    CHECK(spec.operation_count() == 20);
    CHECK(spec.base_path == "/v2");
    // formData parameters surface as body fields
    const auto* upload = spec.find_operation("uploadFile");
    REQUIRE(upload != nullptr);
    bool saw_body_field = false;
    for (const auto& p : upload->parameters) {
        if (p.name == "additionalMetadata") {
            saw_body_field = true;
            CHECK(p.location == ParamLocation::BodyField);
        }
    }
    CHECK(saw_body_field);
    // array-typed body collapses to its element schema
    CHECK(spec.find_operation("createUsersWithArrayInput")->request_body_schema == "User");
    // nested refs resolve
    CHECK(spec.schemas.at("Pet").properties.at("category").nested == "Category");
    CHECK(spec.schemas.at("Pet").properties.at("tags").type == ValueKind::ArrayOf);
    CHECK(spec.schemas.at("Pet").properties.at("tags").nested == "Tag");
}

TEST_CASE("resolution totality: every reference reachable from operations resolves") {
    for (const auto& path : {data_path("petstore_full.json"), data_path("petstore_v2.yaml")}) {
        const auto spec = parse_spec_file(path);
        for (const auto* op : spec.operations()) {
            for (const auto& p : op->parameters) {
                if (p.schema_ref) CHECK(spec.schemas.count(*p.schema_ref) == 1);
            }
            if (op->request_body_schema)
                CHECK(spec.schemas.count(*op->request_body_schema) == 1);
            for (const auto& [code, resp] : op->responses) {
                if (resp.schema_name) CHECK(spec.schemas.count(*resp.schema_name) == 1);
            }
        }
        for (const auto& [name, schema] : spec.schemas) {
            for (const auto& [pname, prop] : schema.properties) {
                if (prop.nested) CHECK(spec.schemas.count(*prop.nested) == 1);
            }
        }
    }
}

TEST_CASE("round trip: serialize then parse is structurally equal") {
    const auto spec = parse_spec(petstore_spec_yaml());
    const auto reparsed = parse_spec(serialize_spec(spec), SpecFormat::Json);
    CHECK(spec.structurally_equal(reparsed));

    const auto full = parse_spec_file(data_path("petstore_full.json"));
    const auto full_again = parse_spec(serialize_spec(full), SpecFormat::Json);
    CHECK(full.structurally_equal(full_again));
}

TEST_CASE("unsupported methods are kept but flagged") {
    const auto spec = parse_spec(R"(
openapi: "3.0.0"
info: {title: t, version: v}
paths:
  /thing:
    patch:
      operationId: patchThing
      responses:
        "200": {description: ok}
    get:
      operationId: getThing
      responses:
        "200": {description: ok}
)");
    const auto* patched = spec.find_operation("patchThing");
    REQUIRE(patched != nullptr);
    CHECK_FALSE(patched->supported);
    CHECK(spec.find_operation("getThing")->supported);
    CHECK_THROWS_AS(crud_kind(*patched), UnsupportedMethodError);
}

TEST_CASE("crud mapping is the fixed bijection on the four verbs") {
    CHECK(crud_kind(HttpMethod::Post) == CrudKind::Create);
    CHECK(crud_kind(HttpMethod::Get) == CrudKind::Read);
    CHECK(crud_kind(HttpMethod::Put) == CrudKind::Update);
    CHECK(crud_kind(HttpMethod::Delete) == CrudKind::Delete);
}

TEST_CASE("anonymous inline schemas get synthetic names") {
    const auto spec = parse_spec(R"(
openapi: "3.0.0"
info: {title: t, version: v}
paths:
  /widgets:
    post:
      operationId: makeWidget
      requestBody:
        content:
          application/json:
            schema:
              type: object
              properties:
                size: {type: integer}
      responses:
        "200":
          description: ok
          content:
            application/json:
              schema:
                type: object
                properties:
                  token: {type: string}
)");
    CHECK(spec.find_operation("makeWidget")->request_body_schema ==
          "makeWidget_body_inline_1");
    CHECK(spec.find_operation("makeWidget")->responses.at("200").schema_name ==
          "makeWidget_response_200_inline_1");
    CHECK(spec.schemas.at("makeWidget_body_inline_1").properties.count("size") == 1);
}

TEST_CASE("allOf flattens by property union; oneOf takes the first variant") {
    const auto spec = parse_spec(R"(
openapi: "3.0.0"
info: {title: t, version: v}
paths: {}
components:
  schemas:
    Base:
      type: object
      properties:
        id: {type: integer}
    Extended:
      allOf:
        - $ref: "#/components/schemas/Base"
        - type: object
          properties:
            label: {type: string}
    Choice:
      oneOf:
        - type: object
          properties:
            alpha: {type: string}
        - type: object
          properties:
            beta: {type: string}
)");
    const auto& extended = spec.schemas.at("Extended");
    CHECK(extended.properties.count("id") == 1);
    CHECK(extended.properties.count("label") == 1);
    const auto& choice = spec.schemas.at("Choice");
    CHECK(choice.properties.count("alpha") == 1);
    CHECK(choice.properties.count("beta") == 0);
    CHECK_FALSE(spec.diagnostics.empty());
}

TEST_CASE("parse failures raise the right errors") {
    CHECK_THROWS_AS(parse_spec("{ not json", SpecFormat::Json), ParseError);
    CHECK_THROWS_AS(parse_spec("swagger: \"1.2\"\npaths: {}"), UnsupportedVersionError);
    CHECK_THROWS_AS(parse_spec("info: {}\npaths: {}"), UnsupportedVersionError);
    CHECK_THROWS_AS(parse_spec(R"(
openapi: "3.0.0"
info: {title: t, version: v}
paths:
  /a:
    get:
      operationId: getA
      responses:
        "200":
          description: ok
          content:
            application/json:
              schema:
                $ref: "#/components/schemas/Missing"
)"),
                    UnresolvedRefError);
    CHECK_THROWS_AS(parse_spec(R"(
openapi: "3.0.0"
info: {title: t, version: v}
paths:
  /a:
    get:
      operationId: dup
      responses: {"200": {description: ok}}
  /b:
    get:
      operationId: dup
      responses: {"200": {description: ok}}
)"),
                    ParseError);
}
