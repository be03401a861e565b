#pragma once

#include <string>

#include "uukin/distribution.hpp"
#include "uukin/lattice.hpp"

namespace uukin {

inline constexpr int kCheckpointVersion = 1;

/// Raw little-endian float64 (re, im) pairs in index order written to `<base>.bin`,
/// with a JSON sidecar `<base>.json` holding M, dp, t, eps and the format version.
void save_pair_correlation(const PairCorrelation& phi, const std::string& base);
PairCorrelation load_pair_correlation(const std::string& base, const LatticeBudget& budget = {});

/// State needed to continue an isotropic run exactly where it stopped.
struct IsoCheckpoint {
  double t = 0.0;
  DistributionIso f;
  double dt_next = 0.0;
  double err_prev = 1.0;
  double reference_max = 0.0;
  std::size_t accepted = 0;
  std::size_t snapshot_count = 0;
};

/// Writes `<base>.csv` (eps,f) and `<base>.json` (controller state).
void save_iso_checkpoint(const IsoCheckpoint& cp, const std::string& base);
IsoCheckpoint load_iso_checkpoint(const std::string& base);

}  // namespace uukin
