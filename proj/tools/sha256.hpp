#pragma once

#include <cstdint>
#include <string>

namespace tool {

// Hex digest of the buffer (FIPS 180-4).
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_file_hex(const std::string& path);

}  // namespace tool
