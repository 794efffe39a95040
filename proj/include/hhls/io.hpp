#pragma once

#include <string>

namespace hhls {

// Whole-file helpers; failures throw an Io error naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hhls
