#pragma once

// Command-line front end: parameter parsing, the worker pool, table output
// and the commands themselves.  `run` is what main() calls; tests call it
// with string streams.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sixvertex/real.hpp"

namespace sixv::cli {

enum Exit : int { kOk = 0, kComputeFailure = 1, kInvalidInput = 2 };

/// Decimal literal or a multiple of pi: "0.3", "-1e-2", "pi", "pi/3",
/// "2pi/3", "2*pi/3", "-pi/4".  Parsed straight to precision p.
Real parse_value(std::string_view text, Precision p);

/// "v" or "lo..hi..step" (inclusive of hi up to rounding).
std::vector<Real> parse_grid(std::string_view text, Precision p);

/// "n" or "lo..hi".
std::pair<int, int> parse_n_range(std::string_view text);

/// Everything a command needs.  Field names match both the long flags and
/// the keys accepted by --config.
struct RunConfig {
  std::string command;  ///< exact, check, bulk, density, fit
  std::string check;    ///< check name for `check`
  std::string phase;
  std::string gamma;
  std::string t;
  std::string zeta;
  std::string n;
  unsigned bits = 256;
  std::string format = "csv";
  std::string out;
  int jobs = 1;
  int grid = 400;
  std::optional<int> cutoff;
  int window = 6;
  int m_max = 20000;
};

using Cell = std::variant<long, double, std::string>;

struct Table {
  std::string command;
  unsigned bits = 0;
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool all_pass = true;  ///< check reports only
};

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);

/// Runs one command against a parsed config.  Throws sixv::Error subclasses.
Table execute(const RunConfig& cfg);

/// Full CLI: argument parsing, SIXV_BITS, --config, output and exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sixv::cli
