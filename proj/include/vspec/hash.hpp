#pragma once

#include <string>
#include <string_view>

namespace vspec {

/// SHA-256 of the exact bytes, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's raw bytes. Throws Error{IoError} if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace vspec
