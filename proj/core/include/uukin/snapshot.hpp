#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "uukin/distribution.hpp"
#include "uukin/lattice.hpp"

namespace uukin {

/// `eps,f` CSV, header plus one row per node, 17 significant digits.
std::string distribution_csv(const DistributionIso& f);
void write_distribution_csv(const DistributionIso& f, const std::string& path);
/// Reads an `eps,f` CSV back; the grid is rebuilt from the eps column.
DistributionIso read_distribution_csv(const std::string& path);

/// `i,j,k,eps,f` CSV for a lattice distribution.
void write_lattice_csv(const DistributionLattice& f, const std::string& path);

/// `x,re,im` CSV for a complex profile on a 1-D grid.
void write_complex_csv(const std::vector<double>& x, const std::vector<std::complex<double>>& v,
                       const std::string& header_x, const std::string& path);

struct IndexEntry {
  double t = 0.0;
  std::string path;  // relative to the index file
};

/// `t,path` CSV mapping snapshot times to files.
void write_index(const std::vector<IndexEntry>& entries, const std::string& path);
std::vector<IndexEntry> read_index(const std::string& path);

/// Lattice trajectory as CSV rows `t,f_0,...,f_{N-1}`, used for resuming memory runs.
void write_lattice_history(const std::vector<DistributionLattice>& snaps, const std::string& path);
std::vector<DistributionLattice> read_lattice_history(const Lattice3& lat, const std::string& path);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);
std::string write_text_file(const std::string& path, const std::string& text);  // returns path

}  // namespace uukin
