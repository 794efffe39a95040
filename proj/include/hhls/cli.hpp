#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hhls {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;

inline constexpr const char* kToolVersion = "0.3.0";

std::string sha256_hex(const std::string& bytes);

// Provenance of one CLI run: the exact bytes of every input, the resolved
// parameters and the files written. Rendered as manifest.json.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  // Reads a file and records its digest.
  std::string read(const std::string& path);
  void parameter(const std::string& key, const std::string& value) { parameters_[key] = value; }
  void output(const std::string& name) { outputs_.push_back(name); }

  // Pretty-printed JSON with sorted keys; `created` is the only field that
  // differs between identical runs.
  std::string to_json(const std::string& created) const;
  // Writes manifest.json into `dir`, stamped with the current UTC time
  // (SOURCE_DATE_EPOCH when set).
  void write(const std::string& dir) const;

 private:
  struct Input {
    std::string path;
    std::string sha256;
    std::size_t bytes = 0;
  };

  std::string command_;
  std::vector<Input> inputs_;
  std::map<std::string, std::string> parameters_;
  std::vector<std::string> outputs_;
};

// Runs the command line `args` (without the program name). Returns the exit
// code; normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hhls
