#pragma once

#include <stdexcept>
#include <string>

namespace epic {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Gateway / provider failures.
struct GatewayError : Error {
    using Error::Error;
};
// Non-2xx client-error status; never retried.
struct RequestRejectedError : GatewayError {
    using GatewayError::GatewayError;
};
// Strict-mode mock received a request it has no rule for.
struct MockMissError : GatewayError {
    using GatewayError::GatewayError;
};
// 2xx response without usable completion text.
struct MalformedResponseError : GatewayError {
    using GatewayError::GatewayError;
};

// LLM response had no $$$$ test region.
struct TestExtractionError : Error {
    using Error::Error;
};
// LLM mutation response lacked the #Explanation/#End markers.
struct MutationParseError : Error {
    using Error::Error;
};

struct LexiconError : Error {
    using Error::Error;
};
struct SandboxError : Error {
    using Error::Error;
};
struct PricingError : Error {
    using Error::Error;
};
struct DatasetError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace epic
