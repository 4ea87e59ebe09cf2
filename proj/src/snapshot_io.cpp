#include "sprd/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace sprd {
namespace {

static_assert(sizeof(double) == 8);

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  return std::filesystem::path(stem.string() + ext);
}

}  // namespace

void write_snapshot(const std::filesystem::path& stem, const Field& field,
                    const SnapshotMeta& meta) {
  std::ofstream bin(with_ext(stem, ".bin"), std::ios::binary);
  require(bin.good(), "cannot open " + with_ext(stem, ".bin").string(), ErrorCode::Io);
  for (double v : field.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    bits = to_little_endian(bits);
    bin.write(reinterpret_cast<const char*>(&bits), 8);
  }
  nlohmann::json side = {{"dim", meta.dim},   {"n", meta.n},
                         {"ell", meta.ell},   {"time", meta.time},
                         {"component", meta.component}};
  std::ofstream js(with_ext(stem, ".json"));
  require(js.good(), "cannot open " + with_ext(stem, ".json").string(), ErrorCode::Io);
  js << side.dump(2) << '\n';
}

Field read_snapshot(const std::filesystem::path& stem, SnapshotMeta* meta) {
  std::ifstream js(with_ext(stem, ".json"));
  require(js.good(), "cannot open " + with_ext(stem, ".json").string(), ErrorCode::Io);
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("bad snapshot sidecar: ") + e.what());
  }
  SnapshotMeta m;
  m.dim = side.at("dim").get<int>();
  m.n = side.at("n").get<int>();
  m.ell = side.at("ell").get<int>();
  m.time = side.at("time").get<double>();
  m.component = side.at("component").get<int>();
  const Grid grid = make_grid(m.dim, m.n);

  std::ifstream bin(with_ext(stem, ".bin"), std::ios::binary);
  require(bin.good(), "cannot open " + with_ext(stem, ".bin").string(), ErrorCode::Io);
  std::vector<double> values(grid.cells());
  for (double& v : values) {
    std::uint64_t bits = 0;
    bin.read(reinterpret_cast<char*>(&bits), 8);
    require(bin.good(), "snapshot payload shorter than the sidecar grid", ErrorCode::Io);
    bits = to_little_endian(bits);
    std::memcpy(&v, &bits, 8);
  }
  if (meta) *meta = m;
  return Field(grid, std::move(values));
}

void write_state_snapshots(const std::filesystem::path& dir, std::size_t index,
                           const SystemState& state) {
  std::filesystem::create_directories(dir);
  for (std::size_t c = 0; c < state.ell(); ++c) {
    std::ostringstream name;
    name << "snap_" << std::setw(6) << std::setfill('0') << index << "_c" << c;
    const Grid& g = state.grid();
    write_snapshot(dir / name.str(), state.components[c],
                   {g.dim, g.n, static_cast<int>(state.ell()), state.time,
                    static_cast<int>(c)});
  }
}

}  // namespace sprd
