#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace CLI {
class App;
}

namespace freepoints::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInvariant = 4;

// Raised by a subcommand that detected a contract violation; `record` is
// dumped alongside the message.
class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(std::string const& what, Json record)
      : std::runtime_error(what), record_(std::move(record)) {}
  Json const& record() const { return record_; }

 private:
  Json record_;
};

// Output handling for one run: with a prefix, artifacts go to
// <prefix>.<ext> next to <prefix>.manifest.json, guarded by <prefix>.lock;
// without one, the primary JSON goes to stdout.
class RunContext {
 public:
  RunContext(std::string command, std::optional<std::filesystem::path> prefix);
  ~RunContext();
  RunContext(RunContext const&) = delete;
  RunContext& operator=(RunContext const&) = delete;

  bool has_prefix() const { return prefix_.has_value(); }
  // Writes <prefix>.<ext>; a no-op without a prefix.
  void WriteArtifact(std::string const& ext, std::string const& content);
  // <prefix>.json, or stdout.
  void Emit(Json const& result);
  void EmitText(std::string const& text);
  // Echo of every option of `sub`, as resolved after parsing.
  void WriteManifest(CLI::App const& sub, std::uint64_t budget);

 private:
  std::string command_;
  std::optional<std::filesystem::path> prefix_;
  std::filesystem::path lock_;
  std::vector<std::string> artifacts_;
};

// Expands --config <file.json> into command-line tokens placed ahead of the
// explicit ones, so explicit flags win.  {"command": ..., "form_file": ...,
// "params": {key: value}, "output": ...}.
std::vector<std::string> ExpandConfig(std::vector<std::string> args);

}  // namespace freepoints::cli
