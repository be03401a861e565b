#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "uukin/config.hpp"
#include "uukin/error.hpp"

namespace uukin {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 2,
  kExitNumerical = 3,
  kExitCapacity = 4,
  kExitIo = 5,
};

int exit_code_for(ErrorKind kind);

struct FileEntry {
  std::string path;  // relative to the output directory
  std::string digest;
};

struct RunRecord {
  std::string scenario;
  std::string version;
  std::string start_time, end_time;  // UTC, ISO 8601
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<FileEntry> files;
  std::map<std::string, double> diagnostics;
  std::map<std::string, std::string> notes;
  /// Named tables (e.g. the exponent table), each a list of rows of named values.
  std::map<std::string, std::vector<std::map<std::string, double>>> tables;
  std::string status = "ok";
  std::string error;
  int exit_code = kExitOk;
  bool resumed = false;

  std::string to_json() const;
};

struct RunOptions {
  bool resume = false;
  std::ostream* log = nullptr;
  /// Write record.json into the output directory.
  bool write_record = true;
};

/// Executes the configured scenario. Errors are caught, mapped to an exit code and
/// stored in the record (which is still written).
RunRecord run(const RunConfig& cfg, const RunOptions& opts = {});

/// Reloads a trajectory from its index file and fits blow-up time and exponents.
RunRecord fit_from_index(const std::string& index_path);

std::string library_version();

}  // namespace uukin
