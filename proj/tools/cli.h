#ifndef OPTELE_TOOLS_CLI_H_
#define OPTELE_TOOLS_CLI_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace optele::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantViolation = 1,
  kConfigError = 2,
  kCutoffSaturation = 3,
};

// A missing value (e.g. the fidelity of a failed branch) is monostate.
using Cell = std::variant<std::monostate, double, int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// %.12g, the precision shared by the CSV and JSON payloads.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& table);

// Runs one scenario. The payload goes to `out` (or the --out file) and the
// human summary to `summary`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& summary);

}  // namespace optele::cli

#endif  // OPTELE_TOOLS_CLI_H_
