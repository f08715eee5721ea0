#pragma once

#include <stdexcept>
#include <string>

namespace rpgfuzz {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnresolvedRefError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedVersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedMethodError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownNodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMutationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnboundRequiredPathParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SequenceAbortedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rpgfuzz
