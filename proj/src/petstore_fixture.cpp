#include "rpgfuzz/petstore_fixture.hpp"

#include <charconv>

namespace rpgfuzz {

const std::string& petstore_spec_yaml() {
    static const std::string yaml = R"yaml(openapi: "3.0.0"
info:
  title: "Petstore"
  version: "1.0.0"
servers:
  - url: "/v2"
paths:
  /pet:
    post:
      operationId: addPet
      requestBody:
        required: true
        content:
          application/json:
            schema:
              $ref: "#/components/schemas/Pet"
      responses:
        "200":
          description: "successful operation"
        "405":
          description: "invalid input"
  /pet/findByStatus:
    get:
      operationId: findPetsByStatus
      parameters:
        - name: status
          in: query
          required: true
          schema:
            type: string
            enum: [available, pending, sold]
      responses:
        "200":
          description: "successful operation"
          content:
            application/json:
              schema:
                type: array
                items:
                  $ref: "#/components/schemas/Pet"
        "400":
          description: "invalid status value"
  /pet/{petId}:
    get:
      operationId: getPetById
      parameters:
        - name: petId
          in: path
          required: true
          schema:
            type: integer
            format: int64
      responses:
        "200":
          description: "successful operation"
          content:
            application/json:
              schema:
                $ref: "#/components/schemas/Pet"
        "400":
          description: "invalid id supplied"
        "404":
          description: "pet not found"
  /store/order:
    post:
      operationId: placeOrder
      requestBody:
        required: true
        content:
          application/json:
            schema:
              $ref: "#/components/schemas/Order"
      responses:
        "200":
          description: "successful operation"
          content:
            application/json:
              schema:
                $ref: "#/components/schemas/Order"
        "400":
          description: "invalid order"
  /store/order/{orderId}:
    get:
      operationId: getOrderById
      parameters:
        - name: orderId
          in: path
          required: true
          schema:
            type: integer
            format: int64
      responses:
        "200":
          description: "successful operation"
          content:
            application/json:
              schema:
                $ref: "#/components/schemas/Order"
        "400":
          description: "invalid id supplied"
        "404":
          description: "order not found"
    delete:
      operationId: deleteOrder
      parameters:
        - name: orderId
          in: path
          required: true
          schema:
            type: integer
            format: int64
      responses:
        "200":
          description: "successful operation"
        "400":
          description: "invalid id supplied"
        "404":
          description: "order not found"
components:
  schemas:
    Pet:
      type: object
      required: [id, name, status]
      properties:
        id:
          type: integer
          format: int64
        name:
          type: string
        status:
          type: string
          enum: [available, pending, sold]
    Order:
      type: object
      required: [id, petId, status]
      properties:
        id:
          type: integer
          format: int64
        petId:
          type: integer
          format: int64
        status:
          type: string
          enum: [placed, approved, delivered]
)yaml";
    return yaml;
}

namespace {

const char* const kPetStatuses[] = {"available", "pending", "sold"};

RawResponse json_response(int status, const Json& body) {
    RawResponse resp;
    resp.status = status;
    resp.body = body.dump();
    resp.headers["Content-Type"] = "application/json";
    return resp;
}

RawResponse error_response(int status, const std::string& message) {
    return json_response(status, Json{{"error", message}});
}

std::optional<std::int64_t> parse_id(const std::string& text) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

Json pet_json(const PetstoreFixture::Pet& pet) {
    return Json{{"id", pet.id}, {"name", pet.name}, {"status", pet.status}};
}

Json order_json(const PetstoreFixture::Order& order) {
    return Json{{"id", order.id}, {"petId", order.pet_id}, {"status", order.status}};
}

}  // namespace

RawResponse PetstoreFixture::send(const ConcreteRequest& request) {
    std::string path = request.url;
    if (path.rfind("/v2/", 0) == 0) path = path.substr(3);

    if (path == "/pet" && request.method == HttpMethod::Post) return handle_add_pet(request);
    if (path == "/pet/findByStatus" && request.method == HttpMethod::Get)
        return handle_find_pets(request);
    if (path.rfind("/pet/", 0) == 0 && request.method == HttpMethod::Get)
        return handle_get_pet(path.substr(5));
    if (path == "/store/order" && request.method == HttpMethod::Post)
        return handle_place_order(request);
    if (path.rfind("/store/order/", 0) == 0) {
        const std::string raw_id = path.substr(13);
        if (request.method == HttpMethod::Get) return handle_get_order(raw_id);
        if (request.method == HttpMethod::Delete) return handle_delete_order(raw_id);
    }
    return error_response(404, "no such endpoint");
}

RawResponse PetstoreFixture::handle_add_pet(const ConcreteRequest& request) {
    if (!request.body || !request.body->is_object())
        return error_response(400, "pet body required");
    const Json& body = *request.body;
    if (!body.contains("id") || !body["id"].is_number_integer())
        return error_response(400, "pet id required");
    const auto id = body["id"].get<std::int64_t>();
    if (pets_.count(id)) return error_response(409, "pet already exists");
    Pet pet;
    pet.id = id;
    pet.name = body.contains("name") && body["name"].is_string() ? body["name"] : "unnamed";
    pet.status =
        body.contains("status") && body["status"].is_string() ? body["status"] : "available";
    pets_[id] = pet;
    // The bundled document says nothing about this response body.
    return json_response(200, pet_json(pet));
}

RawResponse PetstoreFixture::handle_find_pets(const ConcreteRequest& request) {
    auto it = request.query.find("status");
    if (it == request.query.end()) return error_response(400, "status parameter required");
    const std::string& status = it->second;
    bool valid = false;
    for (const char* candidate : kPetStatuses) {
        if (status == candidate) valid = true;
    }
    if (!valid) return error_response(400, "invalid status value");
    Json matches = Json::array();
    for (const auto& [id, pet] : pets_) {
        if (pet.status == status) matches.push_back(pet_json(pet));
    }
    return json_response(200, matches);
}

RawResponse PetstoreFixture::handle_get_pet(const std::string& raw_id) {
    auto id = parse_id(raw_id);
    if (!id) return error_response(400, "invalid pet id");
    auto it = pets_.find(*id);
    if (it == pets_.end()) return error_response(404, "pet not found");
    return json_response(200, pet_json(it->second));
}

RawResponse PetstoreFixture::handle_place_order(const ConcreteRequest& request) {
    if (!request.body || !request.body->is_object())
        return error_response(400, "order body required");
    const Json& body = *request.body;
    if (!body.contains("petId") || !body["petId"].is_number_integer())
        return error_response(400, "order petId required");
    const auto pet_id = body["petId"].get<std::int64_t>();
    if (!pets_.count(pet_id)) return error_response(400, "order references unknown pet");
    Order order;
    order.id = next_order_id_++;  // server-assigned; client ids are ignored
    order.pet_id = pet_id;
    order.status = "placed";
    orders_[order.id] = order;
    return json_response(200, order_json(order));
}

RawResponse PetstoreFixture::handle_get_order(const std::string& raw_id) {
    auto id = parse_id(raw_id);
    if (!id) return error_response(400, "invalid order id");
    auto it = orders_.find(*id);
    if (it == orders_.end()) return error_response(404, "order not found");
    if (!pets_.count(it->second.pet_id)) {
        // Planted defect: the pet behind the order is gone and the lookup
        // blows up instead of degrading.
        return json_response(500, Json{{"error", "internal server error"},
                                       {"exception", "DanglingPetReference"},
                                       {"order", it->second.id}});
    }
    return json_response(200, order_json(it->second));
}

RawResponse PetstoreFixture::handle_delete_order(const std::string& raw_id) {
    auto id = parse_id(raw_id);
    if (!id) return error_response(400, "invalid order id");
    auto it = orders_.find(*id);
    if (it == orders_.end()) return error_response(404, "order not found");
    if (planted_bug_armed_) {
        // Planted defect, part two: deleting an order wrongly drops its pet
        // as well, stranding every other order on that pet.
        pets_.erase(it->second.pet_id);
    }
    orders_.erase(it);
    return json_response(200, Json{{"message", "order deleted"}});
}

}  // namespace rpgfuzz
