#pragma once

// JSON text with round-trip-exact numbers.
//
// Reports are assembled as nlohmann::json values (keys sorted) and written
// here: doubles use 17 significant digits and always carry a '.' or an
// exponent, non-finite doubles become null.

#include <string>

#include <json.hpp>

namespace embq {

using Json = nlohmann::json;

std::string format_number(double v);

/// Two-space indentation, trailing newline.
std::string write_json(const Json& value);

}  // namespace embq
