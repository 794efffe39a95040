#include "hhls/io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hhls/error.hpp"

namespace hhls {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot read " + path + ": " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail_io("error while reading " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot write " + path + ": " + std::strerror(errno));
  out << content;
  out.flush();
  if (!out) fail_io("error while writing " + path);
}

}  // namespace hhls
