#pragma once

#include <string>

namespace immersion {

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace immersion
