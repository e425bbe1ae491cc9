#pragma once

// Surface configuration files, certificate records and the on-disk store.

#include "rankjump/jump.hpp"

#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <string>
#include <vector>

namespace rankjump {

inline constexpr const char* kEngineVersion = "rankjump 1.0.0";

/// Malformed configuration; `line` is 1-based, 0 when the error is not tied to a line.
struct ConfigError : std::invalid_argument {
  ConfigError(std::string source, unsigned line, std::string field, const std::string& message);
  std::string source;
  unsigned line;
  std::string field;
};

/// Parsed surface definition.
///
///   # comment
///   kind  = twist            # twist | km | weierstrass
///   label = congruent
///   f     = 0, -1, 0, 1      # coefficients, constant term first
///   g     = 0, 1
///
/// km uses a0..a3 (missing keys are zero), weierstrass uses A and B.
struct SurfaceConfig {
  std::string label;
  SurfaceDefinition definition;

  Surface surface() const { return Surface::make(definition, label); }
};

SurfaceConfig parse_config(std::istream& in, const std::string& source = "<config>");
SurfaceConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
SurfaceConfig load_config(const std::filesystem::path& path);

/// Comma- or space-separated rationals, optionally bracketed.
RatPoly parse_coefficients(const std::string& text);

/// One cover polynomial per line, in the coefficient syntax above.
CoverChallenge parse_challenge(std::istream& in, const std::string& source = "<avoid>");
CoverChallenge load_challenge(const std::filesystem::path& path);

struct CertificateRecord {
  std::string version = kEngineVersion;
  std::string label;
  SurfaceDefinition definition;
  Budget budget;
  std::string timestamp;
  RankJumpCertificate certificate;
  bool verified = false;
};

/// Timestamp from SOURCE_DATE_EPOCH when set, else the current UTC time (ISO 8601).
std::string default_timestamp();

/// One JSON object on one line, fields in fixed order.
std::string serialize(const CertificateRecord& r);
/// Throws std::invalid_argument on malformed input.
CertificateRecord parse_record(const std::string& line);

/// Append-only directory of <surface_id>.jsonl files.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const std::string& surface_id) const;
  /// Appends records whose t0 is new for their surface; returns how many were written.
  std::size_t append(const std::vector<CertificateRecord>& records);

  struct Line {
    std::filesystem::path file;
    std::size_t number = 0;  // 1-based
    std::string text;
  };
  /// Every non-empty line of every .jsonl file, files in name order.
  std::vector<Line> lines() const;

 private:
  std::filesystem::path dir_;
  std::mutex write_mutex_;
};

}  // namespace rankjump
