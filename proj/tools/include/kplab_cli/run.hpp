#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace kplab::cli {

enum class Subcommand { soliton, evolve, stability, spectrum, verify, rescale };

const char* to_string(Subcommand s);

/// One batch run: the subcommand, its flags as given (by long name, without
/// dashes), the seed and the files it will write.
struct RunManifest {
  Subcommand subcommand = Subcommand::soliton;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
};

/// "64pi" -> 64 pi, "pi" -> pi, "2.5" -> 2.5. Throws InvalidArgument.
double parse_length(const std::string& text);

/// Parses argv into a manifest. Returns false (after printing to `out`)
/// for --help; throws InvalidArgument on malformed command lines.
bool parse_command_line(int argc, const char* const* argv, RunManifest& manifest,
                        std::ostream& out);

/// Validates every parameter and output path, then executes. Writes a short
/// human-readable summary to `out`. Errors propagate as kplab::Error.
void run(const RunManifest& manifest, std::ostream& out);

/// Exit code for the active exception: 1 contract, 2 numerical, 3 I/O.
int exit_code_for(const std::exception& e);

/// The single-line stderr diagnostic for an error.
std::string diagnostic_line(const std::exception& e);

/// Full front door: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kplab::cli
