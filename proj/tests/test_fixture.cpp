#include "doctest.h"

#include "helpers.hpp"
#include "rpgfuzz/petstore_fixture.hpp"

using namespace rpgfuzz;

namespace {

ConcreteRequest post(const std::string& url, Json body) {
    ConcreteRequest req;
    req.method = HttpMethod::Post;
    req.url = url;
    req.body = std::move(body);
    return req;
}

ConcreteRequest get(const std::string& url,
                    std::map<std::string, std::string> query = {}) {
    ConcreteRequest req;
    req.method = HttpMethod::Get;
    req.url = url;
    req.query = std::move(query);
    return req;
}

ConcreteRequest del(const std::string& url) {
    ConcreteRequest req;
    req.method = HttpMethod::Delete;
    req.url = url;
    return req;
}

Json body_of(const RawResponse& resp) { return Json::parse(resp.body); }

}  // namespace

TEST_CASE("addPet returns the created object and refuses duplicates") {
    PetstoreFixture fixture;
    const auto first =
        fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "cat"}, {"status", "available"}}));
    CHECK(first.status == 200);
    const auto body = body_of(first);
    CHECK(body["id"] == 1);
    CHECK(body["name"] == "cat");
    CHECK(body["status"] == "available");

    const auto second =
        fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "other"}, {"status", "sold"}}));
    CHECK(second.status == 409);

    CHECK(fixture.send(post("/v2/pet", Json{{"name", "no-id"}})).status == 400);
}

TEST_CASE("findPetsByStatus validates against the pet enum") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "cat"}, {"status", "available"}}));
    fixture.send(post("/v2/pet", Json{{"id", 2}, {"name", "dog"}, {"status", "sold"}}));

    const auto ok = fixture.send(get("/v2/pet/findByStatus", {{"status", "available"}}));
    CHECK(ok.status == 200);
    REQUIRE(body_of(ok).size() == 1);
    CHECK(body_of(ok)[0]["id"] == 1);

    // order statuses are never pet statuses
    CHECK(fixture.send(get("/v2/pet/findByStatus", {{"status", "placed"}})).status == 400);
    CHECK(fixture.send(get("/v2/pet/findByStatus", {{"status", "junk"}})).status == 400);
    CHECK(fixture.send(get("/v2/pet/findByStatus")).status == 400);

    const auto empty = fixture.send(get("/v2/pet/findByStatus", {{"status", "pending"}}));
    CHECK(empty.status == 200);
    CHECK(body_of(empty).empty());
}

TEST_CASE("getPetById: found, missing, malformed") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 5}, {"name", "cat"}, {"status", "sold"}}));
    CHECK(fixture.send(get("/v2/pet/5")).status == 200);
    CHECK(fixture.send(get("/v2/pet/6")).status == 404);
    CHECK(fixture.send(get("/v2/pet/abc")).status == 400);
}

TEST_CASE("placeOrder accepts only live pets and assigns sparse ids") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 9}, {"name", "cat"}, {"status", "available"}}));

    const auto rejected = fixture.send(post("/v2/store/order", Json{{"petId", 123}}));
    CHECK(rejected.status == 400);

    const auto accepted = fixture.send(post("/v2/store/order", Json{{"petId", 9}}));
    CHECK(accepted.status == 200);
    const auto order = body_of(accepted);
    CHECK(order["petId"] == 9);
    CHECK(order["status"] == "placed");
    CHECK(order["id"].get<std::int64_t>() > 1000000);  // never collides with random guesses

    CHECK(fixture.send(post("/v2/store/order", Json{{"quantity", 1}})).status == 400);
}

TEST_CASE("order lookup and deletion") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 9}, {"name", "cat"}, {"status", "available"}}));
    const auto order = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 9}})));
    const auto id = order["id"].get<std::int64_t>();

    CHECK(fixture.send(get("/v2/store/order/" + std::to_string(id))).status == 200);
    CHECK(fixture.send(get("/v2/store/order/77")).status == 404);
    CHECK(fixture.send(get("/v2/store/order/xyz")).status == 400);

    CHECK(fixture.send(del("/v2/store/order/" + std::to_string(id))).status == 200);
    CHECK(fixture.send(get("/v2/store/order/" + std::to_string(id))).status == 404);
    CHECK(fixture.send(del("/v2/store/order/" + std::to_string(id))).status == 404);
}

TEST_CASE("the planted defect: reading an order whose pet vanished blows up") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "cat"}, {"status", "available"}}));
    const auto order = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));
    const auto id = order["id"].get<std::int64_t>();

    // out-of-band removal strands the order
    REQUIRE(fixture.remove_pet(1));
    const auto broken = fixture.send(get("/v2/store/order/" + std::to_string(id)));
    CHECK(broken.status == 500);
    CHECK(body_of(broken)["exception"] == "DanglingPetReference");
}

TEST_CASE("the defect is reachable through the api alone") {
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "cat"}, {"status", "available"}}));
    const auto order_a = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));
    const auto order_b = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));

    // deleting order A cascades onto pet 1, stranding order B
    const auto a_id = order_a["id"].get<std::int64_t>();
    const auto b_id = order_b["id"].get<std::int64_t>();
    CHECK(fixture.send(del("/v2/store/order/" + std::to_string(a_id))).status == 200);
    CHECK(fixture.send(get("/v2/store/order/" + std::to_string(b_id))).status == 500);
}

TEST_CASE("disarming the defect removes the cascade") {
    PetstoreFixture fixture(false);
    fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "cat"}, {"status", "available"}}));
    const auto order_a = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));
    const auto order_b = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));
    const auto a_id = order_a["id"].get<std::int64_t>();
    const auto b_id = order_b["id"].get<std::int64_t>();
    CHECK(fixture.send(del("/v2/store/order/" + std::to_string(a_id))).status == 200);
    CHECK(fixture.send(get("/v2/store/order/" + std::to_string(b_id))).status == 200);
}

TEST_CASE("unknown endpoints 404") {
    PetstoreFixture fixture;
    CHECK(fixture.send(get("/v2/unknown")).status == 404);
    ConcreteRequest wrong_method;
    wrong_method.method = HttpMethod::Put;
    wrong_method.url = "/v2/pet";
    CHECK(fixture.send(wrong_method).status == 404);
}

TEST_CASE("identical request streams produce identical response streams") {
    const std::vector<ConcreteRequest> stream{
        post("/v2/pet", Json{{"id", 3}, {"name", "a"}, {"status", "sold"}}),
        post("/v2/store/order", Json{{"petId", 3}}),
        get("/v2/pet/findByStatus", {{"status", "sold"}}),
        get("/v2/pet/3"),
        del("/v2/store/order/1000001"),
        get("/v2/store/order/1000001"),
    };
    PetstoreFixture a, b;
    for (const auto& req : stream) {
        const auto ra = a.send(req);
        const auto rb = b.send(req);
        CHECK(ra.status == rb.status);
        CHECK(ra.body == rb.body);
    }
}

TEST_CASE("the bundled document describes this fixture") {
    const auto spec = parse_spec(petstore_spec_yaml());
    // every documented operation is routable
    PetstoreFixture fixture;
    fixture.send(post("/v2/pet", Json{{"id", 1}, {"name", "n"}, {"status", "available"}}));
    CHECK(fixture.send(get("/v2/pet/findByStatus", {{"status", "available"}})).status == 200);
    CHECK(fixture.send(get("/v2/pet/1")).status == 200);
    const auto order = body_of(fixture.send(post("/v2/store/order", Json{{"petId", 1}})));
    CHECK(fixture.send(get("/v2/store/order/" + order["id"].dump())).status == 200);
    CHECK(fixture.send(del("/v2/store/order/" + order["id"].dump())).status == 200);
}
