#include "uukin/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "uukin/error.hpp"
#include "uukin/snapshot.hpp"

namespace uukin {

using nlohmann::json;

namespace {

std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffull) << (8 * (7 - i));
    return r;
  }
  return x;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw IoError(path + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(path + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

void save_pair_correlation(const PairCorrelation& phi, const std::string& base) {
  const std::string bin = base + ".bin";
  const std::filesystem::path p(bin);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + bin + " for writing");
  std::vector<std::uint64_t> buf;
  buf.reserve(2 * phi.size());
  for (const auto& v : phi.data()) {
    const double re = v.real(), im = v.imag();
    buf.push_back(to_le(std::bit_cast<std::uint64_t>(re)));
    buf.push_back(to_le(std::bit_cast<std::uint64_t>(im)));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
  out.flush();
  if (!out) throw IoError("write failed for " + bin);

  json side = {{"format", "pair_correlation"},
               {"version", kCheckpointVersion},
               {"M", phi.lattice().side()},
               {"dp", phi.lattice().spacing()},
               {"t", phi.t},
               {"eps", phi.eps},
               {"entries", phi.size()},
               {"layout", "little-endian float64 (re, im), index (xi1 * N + xi2) * N + eta1"}};
  write_text_file(base + ".json", side.dump(2) + "\n");
}

PairCorrelation load_pair_correlation(const std::string& base, const LatticeBudget& budget) {
  const std::string side_path = base + ".json";
  const json side = read_json(side_path);
  if (field<int>(side, "version", side_path) != kCheckpointVersion) {
    throw IoError(side_path + ": unsupported checkpoint version");
  }
  const Lattice3 lat(field<int>(side, "M", side_path), field<double>(side, "dp", side_path));
  PairCorrelation phi(lat, budget);
  phi.t = field<double>(side, "t", side_path);
  phi.eps = field<double>(side, "eps", side_path);

  const std::string bin = base + ".bin";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw IoError("cannot open " + bin + " for reading");
  std::vector<std::uint64_t> buf(2 * phi.size());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
  if (in.gcount() != static_cast<std::streamsize>(buf.size() * 8)) throw IoError(bin + ": truncated");
  char extra;
  if (in.read(&extra, 1)) throw IoError(bin + ": longer than the sidecar says");
  auto& d = phi.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = cplx(std::bit_cast<double>(to_le(buf[2 * i])), std::bit_cast<double>(to_le(buf[2 * i + 1])));
  }
  return phi;
}

void save_iso_checkpoint(const IsoCheckpoint& cp, const std::string& base) {
  write_distribution_csv(cp.f, base + ".csv");
  json j = {{"format", "iso_checkpoint"},
            {"version", kCheckpointVersion},
            {"t", cp.t},
            {"dt_next", cp.dt_next},
            {"err_prev", cp.err_prev},
            {"reference_max", cp.reference_max},
            {"accepted", cp.accepted},
            {"snapshot_count", cp.snapshot_count}};
  write_text_file(base + ".json", j.dump(2) + "\n");
}

IsoCheckpoint load_iso_checkpoint(const std::string& base) {
  const std::string path = base + ".json";
  const json j = read_json(path);
  if (field<int>(j, "version", path) != kCheckpointVersion) throw IoError(path + ": unsupported checkpoint version");
  IsoCheckpoint cp;
  cp.t = field<double>(j, "t", path);
  cp.dt_next = field<double>(j, "dt_next", path);
  cp.err_prev = field<double>(j, "err_prev", path);
  cp.reference_max = field<double>(j, "reference_max", path);
  cp.accepted = field<std::size_t>(j, "accepted", path);
  cp.snapshot_count = field<std::size_t>(j, "snapshot_count", path);
  cp.f = read_distribution_csv(base + ".csv");
  return cp;
}

}  // namespace uukin
