#include "uukin/snapshot.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uukin/config.hpp"
#include "uukin/error.hpp"

namespace uukin {

namespace {

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_real(const std::string& s, const std::string& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError(path + ":" + std::to_string(line) + ": not a number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string distribution_csv(const DistributionIso& f) {
  std::string out = "eps,f\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += format_double(f.grid().node(i));
    out += ',';
    out += format_double(f[i]);
    out += '\n';
  }
  return out;
}

std::string write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
  return path;
}

void write_distribution_csv(const DistributionIso& f, const std::string& path) {
  write_text_file(path, distribution_csv(f));
}

DistributionIso read_distribution_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"eps", "f"}) {
    throw IoError(path + ": expected header 'eps,f'");
  }
  std::vector<double> eps, f;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 2) throw IoError(path + ":" + std::to_string(ln) + ": expected 2 columns");
    eps.push_back(to_real(cols[0], path, ln));
    f.push_back(to_real(cols[1], path, ln));
  }
  if (eps.size() < 2) throw IoError(path + ": needs at least 2 rows");
  return DistributionIso(RadialGrid::from_nodes(eps), f);
}

void write_lattice_csv(const DistributionLattice& f, const std::string& path) {
  std::string s = "i,j,k,eps,f\n";
  for (std::size_t p = 0; p < f.values.size(); ++p) {
    const Index3 v = f.lattice.vec(p);
    s += std::to_string(v[0]) + ',' + std::to_string(v[1]) + ',' + std::to_string(v[2]) + ',' +
         format_double(f.lattice.energy(p)) + ',' + format_double(f.values[p]) + '\n';
  }
  write_text_file(path, s);
}

void write_complex_csv(const std::vector<double>& x, const std::vector<std::complex<double>>& v,
                       const std::string& header_x, const std::string& path) {
  std::string s = header_x + ",re,im\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += format_double(x[i]) + ',' + format_double(v[i].real()) + ',' + format_double(v[i].imag()) + '\n';
  }
  write_text_file(path, s);
}

void write_index(const std::vector<IndexEntry>& entries, const std::string& path) {
  std::string s = "t,path\n";
  for (const auto& e : entries) s += format_double(e.t) + ',' + e.path + '\n';
  write_text_file(path, s);
}

std::vector<IndexEntry> read_index(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"t", "path"}) {
    throw IoError(path + ": expected header 't,path'");
  }
  std::vector<IndexEntry> out;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 2) throw IoError(path + ":" + std::to_string(ln) + ": expected 2 columns");
    out.push_back({to_real(cols[0], path, ln), cols[1]});
  }
  return out;
}

void write_lattice_history(const std::vector<DistributionLattice>& snaps, const std::string& path) {
  std::string s;
  for (const auto& f : snaps) {
    s += format_double(f.t);
    for (double v : f.values) s += ',' + format_double(v);
    s += '\n';
  }
  write_text_file(path, s);
}

std::vector<DistributionLattice> read_lattice_history(const Lattice3& lat, const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<DistributionLattice> out;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != lat.size() + 1) {
      throw IoError(path + ":" + std::to_string(ln) + ": expected " + std::to_string(lat.size() + 1) + " columns");
    }
    std::vector<double> v(lat.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_real(cols[i + 1], path, ln);
    out.emplace_back(lat, std::move(v), to_real(cols[0], path, ln));
  }
  return out;
}

std::string file_digest(const std::string& path) {
  auto in = open_in(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace uukin
