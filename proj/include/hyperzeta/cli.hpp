#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hyperzeta/error.hpp"
#include "hyperzeta/oracle.hpp"
#include "hyperzeta/zeta.hpp"

namespace hyperzeta {

enum class OutputFormat { kText, kJson };

struct JobConfig {
  CurveSpec spec;
  ZetaOptions options;
  int verify = 0;  // mmax; 0 skips verification
  OutputFormat format = OutputFormat::kText;
  bool telemetry = true;  // wall time and peak memory in the report
  uint64_t budget = kDefaultBudget;
};

/// Coefficient list "c0, c1, ..." where each item is an integer (a prime
/// field element) or "[d0, ..., d(n-1)]". Throws ParseError naming the
/// character position.
std::vector<std::vector<int64_t>> parse_coefficients(std::string_view text, int n);
/// "a, b, c" with optional surrounding brackets.
std::vector<int64_t> parse_int_list(std::string_view text);

/// Reads "key = value" lines ('#' starts a comment). Keys are the long flag
/// names without dashes.
std::map<std::string, std::string> parse_curve_file(std::string_view text, const std::string& origin);

/// Builds a job from key/value settings, validating every field.
JobConfig make_job(const std::map<std::string, std::string>& settings);

/// Command-line front end; on success fills `job` and returns true. Returns
/// false with `exit_code` set when the process should stop (help, errors).
bool parse_input(int argc, char** argv, JobConfig& job, int& exit_code, std::ostream& err);

int exit_code_for(ErrorCode code);

/// Runs the pipeline and the optional verification and writes the report.
int run(const JobConfig& job, std::ostream& out, std::ostream& err);

}  // namespace hyperzeta
