#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhls/psm.hpp"

namespace hhls {

struct Diagnostic {
  enum class Severity { Error, Warning };

  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;

  // "file:line:col: severity: message"
  std::string to_string() const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

// Parses a .psm source holding any number of components and systems. Never
// throws; every problem is reported as a diagnostic with a span inside `text`.
ParseResult<PsmModule> parse_module(std::string_view text, const std::string& file = {});

// Parses a source that declares exactly one component.
ParseResult<PsmComponent> parse_component(std::string_view text, const std::string& file = {});

// Parses the single system declared in a source (components may accompany it).
ParseResult<PsmSystem> parse_system(std::string_view text, const std::string& file = {});

std::string pretty(const PsmComponent& component);
std::string pretty(const PsmSystem& system);
std::string pretty(const PsmModule& module);

// Reads and parses each file and merges them into one module. Throws an
// Invalid error listing the diagnostics, or an Io error for unreadable files.
PsmModule load_module_files(const std::vector<std::string>& paths);

// Validation findings rendered in diagnostic form.
std::vector<Diagnostic> to_diagnostics(const ValidationReport& report);

}  // namespace hhls
