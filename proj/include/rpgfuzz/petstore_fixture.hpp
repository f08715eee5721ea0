#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "rpgfuzz/executor.hpp"

namespace rpgfuzz {

// The bundled six-operation pet/order service document (YAML). addPet's
// success response carries no schema and both Pet and Order declare a
// `status` property; the fixture implementation below fills those gaps.
const std::string& petstore_spec_yaml();

// Deterministic in-process implementation of the bundled document.
//
// Behavior sheet:
//   addPet            201-free: 200 with the created Pet body (the document
//                     omits the response schema), 409 when the id exists,
//                     400 on malformed bodies.
//   findPetsByStatus  200 with the matching pets, 400 for status values
//                     outside the Pet enum.
//   getPetById        200/400/404.
//   placeOrder        200 with the created Order, 400 when petId is missing
//                     or references no live pet. Order ids are assigned
//                     server-side from a high counter; the client id is
//                     ignored. Status is always "placed".
//   getOrderById      200/400/404 -- and 500 when the order's pet no longer
//                     exists (the planted bug).
//   deleteOrder       200/400/404. While the bug is armed, deleting an
//                     order also drops its pet, which is what strands the
//                     other orders on that pet.
class PetstoreFixture : public Transport {
public:
    struct Pet {
        std::int64_t id = 0;
        std::string name;
        std::string status;
    };
    struct Order {
        std::int64_t id = 0;
        std::int64_t pet_id = 0;
        std::string status;
    };

    explicit PetstoreFixture(bool planted_bug_armed = true)
        : planted_bug_armed_(planted_bug_armed) {}

    RawResponse send(const ConcreteRequest& request) override;

    // Out-of-band hook used by tests to strand orders directly.
    bool remove_pet(std::int64_t id) { return pets_.erase(id) > 0; }

    const std::map<std::int64_t, Pet>& pets() const { return pets_; }
    const std::map<std::int64_t, Order>& orders() const { return orders_; }

private:
    RawResponse handle_add_pet(const ConcreteRequest& request);
    RawResponse handle_find_pets(const ConcreteRequest& request);
    RawResponse handle_get_pet(const std::string& raw_id);
    RawResponse handle_place_order(const ConcreteRequest& request);
    RawResponse handle_get_order(const std::string& raw_id);
    RawResponse handle_delete_order(const std::string& raw_id);

    std::map<std::int64_t, Pet> pets_;
    std::map<std::int64_t, Order> orders_;
    std::int64_t next_order_id_ = 1000001;
    bool planted_bug_armed_ = true;
};

}  // namespace rpgfuzz
