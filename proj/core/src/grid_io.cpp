#include <cstring>
#include <fstream>
#include <vector>

#include "replan/approx.hpp"
#include "replan/errors.hpp"

namespace replan {

namespace {

constexpr char kMagic[4] = {'R', 'J', 'G', 'D'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a64(const std::uint8_t* data, size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

struct Writer {
  std::vector<std::uint8_t> buf;
  template <typename T>
  void put(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    buf.insert(buf.end(), p, p + sizeof(T));
  }
  void put_f64s(const double* p, size_t n) {
    const auto* b = reinterpret_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), b, b + n * sizeof(double));
  }
};

struct Reader {
  const std::uint8_t* p;
  size_t remaining;
  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (remaining < sizeof(T)) throw IoError("grid file: truncated record");
    T v;
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
    remaining -= sizeof(T);
    return v;
  }
  void get_f64s(double* out, size_t n) {
    if (remaining < n * sizeof(double)) throw IoError("grid file: truncated record");
    std::memcpy(out, p, n * sizeof(double));
    p += n * sizeof(double);
    remaining -= n * sizeof(double);
  }
};

}  // namespace

void save_grid(const JacobianGrid& grid, const std::string& path) {
  if (grid.dims.empty()) throw InvalidGrid("save_grid: empty dims list");
  const int n_nodes = grid.n_nodes();
  if (static_cast<int>(grid.payload.size()) != n_nodes ||
      static_cast<int>(grid.valid.size()) != n_nodes)
    throw InvalidGrid("save_grid: payload/valid size mismatch");

  Writer w;
  w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(grid.dims.size()));
  for (int d : grid.dims) w.put(static_cast<std::uint32_t>(d));
  for (const auto& c : grid.node_coords) {
    w.put(static_cast<std::uint32_t>(c.size()));
    w.put_f64s(c.data(), c.size());
  }
  w.put(static_cast<std::uint32_t>(grid.N));
  w.put(grid.t0);
  w.put(grid.T);
  w.put(grid.beta0);
  w.put(static_cast<std::uint32_t>(grid.nominal_p.size()));
  w.put_f64s(grid.nominal_p.data(), grid.nominal_p.size());
  w.put_f64s(grid.nominal_u.data(), grid.nominal_u.size());
  for (int i = 0; i < n_nodes; ++i) w.put(grid.valid[i]);
  const int rows = grid.N + 1;
  const int cols = static_cast<int>(grid.dims.size());
  for (int i = 0; i < n_nodes; ++i) {
    if (!grid.valid[i]) continue;
    if (grid.payload[i].rows() != rows || grid.payload[i].cols() != cols)
      throw InvalidGrid("save_grid: payload matrix shape mismatch");
    // row-major entries
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) w.put(grid.payload[i](r, c));
  }
  w.put(fnv1a64(w.buf.data(), w.buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_grid: cannot open " + path);
  out.write(reinterpret_cast<const char*>(w.buf.data()),
            static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw IoError("save_grid: write failed for " + path);
}

JacobianGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_grid: cannot open " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (buf.size() < 4 + sizeof(std::uint32_t) + sizeof(std::uint64_t))
    throw ChecksumMismatch("load_grid: file too short");
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatVersionMismatch("load_grid: bad magic bytes");

  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 8, 8);
  if (fnv1a64(buf.data(), buf.size() - 8) != stored)
    throw ChecksumMismatch("load_grid: checksum verification failed");

  Reader r{buf.data() + 4, buf.size() - 12};
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion)
    throw FormatVersionMismatch("load_grid: unsupported format version " +
                                std::to_string(version));

  JacobianGrid g;
  const auto nd = r.get<std::uint32_t>();
  g.dims.resize(nd);
  for (auto& d : g.dims) d = static_cast<int>(r.get<std::uint32_t>());
  g.node_coords.resize(nd);
  for (auto& c : g.node_coords) {
    c.resize(r.get<std::uint32_t>());
    r.get_f64s(c.data(), c.size());
  }
  g.N = static_cast<int>(r.get<std::uint32_t>());
  g.t0 = r.get<double>();
  g.T = r.get<double>();
  g.beta0 = r.get<double>();
  g.nominal_p.resize(r.get<std::uint32_t>());
  r.get_f64s(g.nominal_p.data(), g.nominal_p.size());
  g.nominal_u.resize(g.N + 1);
  r.get_f64s(g.nominal_u.data(), g.nominal_u.size());
  const int n_nodes = g.n_nodes();
  g.valid.resize(n_nodes);
  for (auto& v : g.valid) v = r.get<std::uint8_t>();
  g.payload.assign(n_nodes, Eigen::MatrixXd());
  for (int i = 0; i < n_nodes; ++i) {
    if (!g.valid[i]) continue;
    Eigen::MatrixXd m(g.N + 1, nd);
    for (int rr = 0; rr <= g.N; ++rr)
      for (std::uint32_t c = 0; c < nd; ++c) m(rr, c) = r.get<double>();
    g.payload[i] = std::move(m);
  }
  return g;
}

}  // namespace replan
