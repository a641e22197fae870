#ifndef DFC_CLI_HPP
#define DFC_CLI_HPP

#include "dfc/scalar.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfc {

enum class Backend { exact, flt };

struct CliConfig {
  std::string subcommand; // apply, verify, sbp, el-solve
  std::string alpha;      // "p/q" or decimal; empty means the default list (verify)
  Backend backend = Backend::exact;
  std::optional<std::string> a, b;
  std::string op;
  std::string input, output = "-", report = "-";
  std::optional<double> tolerance;

  std::vector<std::string> identities; // verify filter
  int p = 2;
  unsigned long seed = 20240607;

  std::string f, g; // sbp inputs
  std::vector<std::string> theorems;
  std::string reading = "literal";
  bool mutant = false;
};

// "p/q", integer or terminating decimal, for either backend.
mpq_class parse_order(const std::string &text, Backend backend);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Diagnostics are one line each on err,
// prefixed "dfc: error: ".
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dfc

#endif
