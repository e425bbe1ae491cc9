#pragma once

// Subcommand implementations behind the rankjump executable.

#include "rankjump/store.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace rankjump {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitExhausted = 3, kExitVerifyFailed = 4 };

int cmd_classify(const SurfaceConfig& cfg, std::ostream& out);

struct JumpOptions {
  int rank = 1;
  Budget budget;
  CoverChallenge avoid;
  std::optional<std::filesystem::path> store;
  std::string timestamp;  // empty: default_timestamp()
};

/// Streams one JSON record per certificate to `out`; summary lines go to `log`.
int cmd_jump(const SurfaceConfig& cfg, const JumpOptions& opts, std::ostream& out, std::ostream& log);

struct CensusRow {
  unsigned height = 0;
  std::size_t classes = 0;  // distinct extension classes with some x0 of height <= height
  std::size_t fibres = 0;   // solvable fibres with height(x0) <= height
  std::size_t jumps = 0;    // distinct certified t0 with height(t0) <= height
  double thin_reference = 0;  // height^{3/2} log(height), for scale
};

/// Rows for heights 1..max_height; jumps come from conic parameters of height <= param_height.
std::vector<CensusRow> census_table(const Surface& s, unsigned max_height, unsigned param_height = 2,
                                    unsigned threads = 1);

int cmd_census(const SurfaceConfig& cfg, unsigned max_height, unsigned param_height, unsigned threads,
               std::ostream& out);

struct StoreVerification {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t corrupt = 0;
};

/// Re-verifies every record in the store; one line per record.
StoreVerification verify_store(const std::filesystem::path& dir, std::ostream& out);
int cmd_verify(const std::filesystem::path& dir, std::ostream& out);

}  // namespace rankjump
