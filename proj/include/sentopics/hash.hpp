#pragma once

#include <filesystem>
#include <string>

namespace sentopics {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace sentopics
