#include "spdc/errors.hpp"

namespace spdc {

Error::Error(ErrorCategory category, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message), category_(category), module_(std::move(module)) {}

}  // namespace spdc
