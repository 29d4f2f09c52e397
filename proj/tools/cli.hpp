#ifndef KGRAPH_TOOLS_CLI_HPP
#define KGRAPH_TOOLS_CLI_HPP

// Command-line front end for the kgraph engine.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgraph::cli {

/// Unknown verb or flag, missing or malformed flag value. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string verb;  // "help" when only help text was requested
  std::string help_text;
  std::string graph_path;

  std::optional<std::string> beta;
  std::optional<std::string> log_r;
  std::optional<std::string> r;
  std::optional<std::string> colors;
  std::optional<std::string> component;
  std::optional<std::string> vector_path;
  std::optional<std::string> lambda;
  std::optional<std::string> mu;
  std::optional<std::string> theta;
  std::optional<int> per_bound;
  std::optional<int> bound;
  bool per_component = false;
  bool json = false;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// `args` excludes the program name. Throws UsageError.
Command parse_args(const std::vector<std::string>& args);

/// Runs a parsed command; returns the process exit code (0, 1 or 2).
int execute(const Command& command, std::ostream& out, std::ostream& err);

/// parse_args followed by execute, with usage errors mapped to exit code 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgraph::cli

#endif  // KGRAPH_TOOLS_CLI_HPP
