#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weyl/inner.hpp"
#include "weyl/moment.hpp"

namespace weyl {

struct NumericPolicy {
  double axis_epsilon = 1e-3;
  double quad_tol = 1e-10;
  double series_tol = 1e-12;
  // caps
  int n_max = 400;  // applies to generated Jacobi families; explicit lists keep their length
  double sampling_radius = 100.0;
};

enum class SpecKind { Inner, Herglotz, Jacobi };
const char* to_string(SpecKind k);

struct OperatorSpecFile {
  SpecKind kind = SpecKind::Inner;
  std::optional<InnerFunctionSpec> inner;
  std::optional<HerglotzSpec> herglotz;
  std::optional<JacobiSpec> jacobi;
  NumericPolicy policy;
  std::string digest;  // sha256 of the canonical JSON
};

// ParseError with line and column for malformed JSON, ValidationError naming
// the offending field otherwise.
OperatorSpecFile parse_spec_text(const std::string& text);
OperatorSpecFile parse_spec(const std::string& path);

using Cell = std::variant<double, long long, std::string>;

struct Report {
  std::string command;
  std::string spec_digest;
  // Policy echo and command-level results, in insertion order.
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool verification_failed = false;
};

struct RunParams {
  std::optional<std::string> bc;  // "re,im", "re" or "inf"
  std::optional<double> rmax;
  std::optional<std::pair<double, double>> window;
  std::vector<cplx> at;  // evaluation points; each command has a default grid
};

const std::vector<std::string>& command_names();

// Dispatches to the modules. Errors propagate with the command prepended.
Report run(const std::string& command, const OperatorSpecFile& spec, const RunParams& params);

enum class Format { Csv, Json };
Format parse_format(const std::string& text);

// CSV: '#' preamble with the metadata, header row, 17 significant digits.
// JSON: {command, spec_digest, meta, columns, rows} with keys in that order.
std::string render(const Report& report, Format format);
// Writes to path, or to stdout when path is empty. IOError on failure.
void emit(const Report& report, Format format, const std::string& path);

// 0 ok, 2 parse/validation, 3 numeric failure, 4 verification failure.
int exit_code(ErrorCode code);

}  // namespace weyl
