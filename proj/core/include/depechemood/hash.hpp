#pragma once

#include <string>
#include <string_view>

namespace depechemood {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lower-case hex SHA-256 of a file's contents; throws if it cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace depechemood
