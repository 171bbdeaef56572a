#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussvol/integrate.hpp"
#include "gaussvol/linalg.hpp"

namespace gaussvol::cli {

/// Process exit codes. Stable; scripts rely on them.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,  // bad flags, bad config, unparsable matrix file
  kAsymmetric = 3,
  kOutsideClassical = 4,
  kBoxNotConverged = 5,
};

/// Error reading a text input, with 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Whitespace-separated decimal rows; '#' starts a comment. Rows must all have
/// the same length and the matrix must be square.
Matrix read_matrix(std::istream& in);

/// "start:stop:lin|log:count" or a single number.
std::vector<double> parse_range(const std::string& text);

/// "key = value" lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> read_config(std::istream& in);

struct RunConfig {
  std::string subcommand;
  std::string set = "classical";
  std::string reg = "energy";
  std::string energy = "8";
  std::string kappa = "5";
  int m = 4;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int streams = 1;
  double eps_tail = 1e-3;
  double tol = kDefaultTol;
  std::string out;
  std::string write_config;
};

/// Effective configuration as "key = value" lines for `volume` and `sweep`.
/// Output location and config paths are not included.
std::string format_config(const RunConfig& cfg);

/// CSV v1 for a sweep; first line is a "# gaussvol sweep csv v1" marker.
std::string format_sweep_csv(const integrate::SweepTable& table, std::size_t n_samples,
                             std::uint64_t seed);

int cmd_classify(const std::string& path, double tol, std::ostream& out, std::ostream& err);
int cmd_metric(const twomode::CanonicalPoint& p, std::ostream& out, std::ostream& err);
int cmd_volume(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line (without the program name). Returns the exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace gaussvol::cli
