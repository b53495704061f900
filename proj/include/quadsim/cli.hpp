#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quadsim::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kIoError = 3,
  kNotImplemented = 4,
};

struct Options {
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;  // KEY=VALUE, applied after the file
  std::vector<std::string> protocols;  // --protocol, repeatable
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> seed_count;  // --seeds N -> 0..N-1
  std::optional<std::uint64_t> rounds;
  std::optional<std::filesystem::path> out;
};

/// --out, else $QUADSIM_OUT, else ./quadsim-out.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag);

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace quadsim::cli
