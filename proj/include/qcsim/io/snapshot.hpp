#pragma once

// Binary snapshot layout (all integers and reals little-endian):
//
//   8 bytes  magic "QCSIMSNP"
//   u32      format version
//   u32      type tag (SnapshotType)
//   u32      endianness marker 0x01020304
//   u32      reserved, 0
//   ...      type-specific header: grid descriptors (f64 min, f64 max,
//            u64 n, u32 boundary, u32 0), scalars, u64 payload length
//   f64[]    payload; complex numbers as (re, im) pairs
//
// The file must end exactly at the end of the payload.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>

#include "qcsim/fields.hpp"
#include "qcsim/meanfield.hpp"
#include "qcsim/io/table.hpp"

namespace qcsim::io {

inline constexpr char kSnapshotMagic[8] = {'Q', 'C', 'S', 'I', 'M', 'S', 'N', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::uint32_t kEndianMarker = 0x01020304u;

enum class SnapshotType : std::uint32_t {
  HybridDensity = 1,
  Wigner = 2,
  Wave = 3,
  Classical = 4,
  MeanField = 5,
  Ehrenfest = 6,
};

inline const char* to_string(SnapshotType t) {
  switch (t) {
    case SnapshotType::HybridDensity: return "hybrid-density";
    case SnapshotType::Wigner: return "wigner";
    case SnapshotType::Wave: return "wave-function";
    case SnapshotType::Classical: return "classical-distribution";
    case SnapshotType::MeanField: return "mean-field";
    case SnapshotType::Ehrenfest: return "ehrenfest";
  }
  return "unknown";
}

namespace detail {

class Writer {
 public:
  void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void grid(const SpatialGrid& g) {
    f64(g.min());
    f64(g.max());
    u64(g.size());
    u32(g.periodic() ? 0u : 1u);
    u32(0);
  }
  void complex_payload(const Vector& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      f64(v(i).real());
      f64(v(i).imag());
    }
  }
  void real_payload(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw FormatError("snapshot truncated at byte " + std::to_string(b_.size()));
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  SpatialGrid grid() {
    const double lo = f64(), hi = f64();
    const std::uint64_t n = u64();
    const std::uint32_t b = u32();
    u32();
    if (b > 1) throw FormatError("snapshot grid has an unknown boundary code");
    return SpatialGrid(lo, hi, n, b == 0 ? Boundary::Periodic : Boundary::Bounded);
  }
  Vector complex_payload(std::size_t expected) {
    const std::uint64_t n = u64();
    if (n != expected) throw FormatError("snapshot payload length does not match its grids");
    need(16 * n);
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double re = f64();
      v(i) = cplx(re, f64());
    }
    return v;
  }
  Eigen::VectorXd real_payload(std::size_t expected) {
    const std::uint64_t n = u64();
    if (n != expected) throw FormatError("snapshot payload length does not match its grids");
    need(8 * n);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f64();
    return v;
  }
  /// Guard before allocating: the rest of the file must hold count·width payload bytes.
  void expect_payload(std::size_t count, std::size_t width) const {
    const std::size_t left = b_.size() - pos_;
    if (left < 8 || (left - 8) / width < count) throw FormatError("snapshot truncated: payload shorter than its grids imply");
  }
  void finish() const {
    if (pos_ != b_.size()) throw FormatError("snapshot has trailing bytes");
  }

 private:
  std::string_view b_;
  std::size_t pos_ = 0;
};

inline Writer header(SnapshotType t) {
  Writer w;
  w.raw(kSnapshotMagic, 8);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(t));
  w.u32(kEndianMarker);
  w.u32(0);
  return w;
}

inline SnapshotType read_header(Reader& r, std::string_view bytes) {
  r.need(8);
  if (std::memcmp(bytes.data(), kSnapshotMagic, 8) != 0) throw FormatError("not a qcsim snapshot (bad magic)");
  for (int i = 0; i < 2; ++i) r.u32();  // skip magic
  const std::uint32_t version = r.u32();
  if (version != kSnapshotVersion) throw FormatError("unsupported snapshot version " + std::to_string(version));
  const std::uint32_t tag = r.u32();
  if (r.u32() != kEndianMarker) throw FormatError("snapshot endianness marker mismatch");
  r.u32();
  if (tag < 1 || tag > 6) throw FormatError("unknown snapshot type tag " + std::to_string(tag));
  return static_cast<SnapshotType>(tag);
}

inline Role read_role(Reader& r) {
  const std::uint32_t v = r.u32();
  if (v > 1) throw FormatError("snapshot has an unknown role code");
  return v == 0 ? Role::State : Role::Observable;
}

inline void expect(SnapshotType got, SnapshotType want) {
  if (got != want)
    throw FormatError(std::string("snapshot holds a ") + to_string(got) + ", expected a " + to_string(want));
}

}  // namespace detail

inline SnapshotType snapshot_type(std::string_view bytes) {
  detail::Reader r(bytes);
  return detail::read_header(r, bytes);
}

// Encoders.

inline std::string encode_snapshot(const HybridDensityField& d) {
  auto w = detail::header(SnapshotType::HybridDensity);
  w.grid(d.classical().q());
  w.grid(d.classical().p());
  w.grid(d.quantum());
  w.u32(d.role() == Role::State ? 0 : 1);
  w.complex_payload(d.data());
  return w.take();
}

inline std::string encode_snapshot(const WignerField& f) {
  auto w = detail::header(SnapshotType::Wigner);
  w.grid(f.classical().q());
  w.grid(f.classical().p());
  w.grid(f.lattice().quantum());
  w.f64(f.hbar());
  w.u32(f.role() == Role::State ? 0 : 1);
  w.complex_payload(f.data());
  return w.take();
}

inline std::string encode_snapshot(const WaveFunction& psi) {
  auto w = detail::header(SnapshotType::Wave);
  w.grid(psi.grid());
  w.complex_payload(psi.amplitudes());
  return w.take();
}

inline std::string encode_snapshot(const ClassicalDistribution& d) {
  auto w = detail::header(SnapshotType::Classical);
  w.grid(d.grid().q());
  w.grid(d.grid().p());
  w.real_payload(d.data());
  return w.take();
}

/// A mean-field state does not carry its quantum grid, so the snapshot pairs them.
struct MeanFieldSnapshot {
  MeanFieldState state;
  SpatialGrid quantum;
};

inline std::string encode_snapshot(const MeanFieldSnapshot& m) {
  if (static_cast<std::size_t>(m.state.rho.rows()) != m.quantum.size() || m.state.rho.rows() != m.state.rho.cols())
    throw GridError("mean-field snapshot: rho does not match the quantum grid");
  auto w = detail::header(SnapshotType::MeanField);
  w.grid(m.state.classical.grid().q());
  w.grid(m.state.classical.grid().p());
  w.grid(m.quantum);
  w.real_payload(m.state.classical.data());
  w.complex_payload(m.state.rho.reshaped());
  return w.take();
}

inline std::string encode_snapshot(const EhrenfestState& s) {
  auto w = detail::header(SnapshotType::Ehrenfest);
  w.f64(s.x.q);
  w.f64(s.x.p);
  w.grid(s.psi.grid());
  w.complex_payload(s.psi.amplitudes());
  return w.take();
}

// Decoders. Each checks magic, version, tag and exact length.

template <class T>
T decode_snapshot(std::string_view bytes);

template <>
inline HybridDensityField decode_snapshot<HybridDensityField>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::HybridDensity);
  const SpatialGrid q = r.grid(), p = r.grid(), xi = r.grid();
  const Role role = detail::read_role(r);
  r.expect_payload(q.size() * p.size() * xi.size() * xi.size(), 16);
  HybridDensityField d(PhaseSpaceGrid(q, p), xi, role);
  d.data() = r.complex_payload(d.points() * d.block_size());
  r.finish();
  return d;
}

template <>
inline WignerField decode_snapshot<WignerField>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::Wigner);
  const SpatialGrid q = r.grid(), p = r.grid(), xi = r.grid();
  const double hbar = r.f64();
  const Role role = detail::read_role(r);
  r.expect_payload(q.size() * p.size() * (2 * xi.size() - 1) * xi.size(), 16);
  WignerField f(PhaseSpaceGrid(q, p), WignerLattice(xi, hbar), role);
  f.data() = r.complex_payload(f.classical().size() * f.lattice().size());
  r.finish();
  return f;
}

template <>
inline WaveFunction decode_snapshot<WaveFunction>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::Wave);
  const SpatialGrid g = r.grid();
  Vector v = r.complex_payload(g.size());
  r.finish();
  return WaveFunction(g, std::move(v));
}

template <>
inline ClassicalDistribution decode_snapshot<ClassicalDistribution>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::Classical);
  const SpatialGrid q = r.grid(), p = r.grid();
  const PhaseSpaceGrid g(q, p);
  Eigen::VectorXd v = r.real_payload(g.size());
  r.finish();
  return ClassicalDistribution(g, std::move(v));
}

template <>
inline MeanFieldSnapshot decode_snapshot<MeanFieldSnapshot>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::MeanField);
  const SpatialGrid q = r.grid(), p = r.grid(), xi = r.grid();
  const PhaseSpaceGrid g(q, p);
  MeanFieldSnapshot m;
  m.quantum = xi;
  m.state.classical = ClassicalDistribution(g, r.real_payload(g.size()));
  const auto n = static_cast<Eigen::Index>(xi.size());
  m.state.rho = r.complex_payload(xi.size() * xi.size()).reshaped(n, n);
  r.finish();
  return m;
}

template <>
inline EhrenfestState decode_snapshot<EhrenfestState>(std::string_view bytes) {
  detail::Reader r(bytes);
  detail::expect(detail::read_header(r, bytes), SnapshotType::Ehrenfest);
  EhrenfestState s;
  s.x.q = r.f64();
  s.x.p = r.f64();
  const SpatialGrid g = r.grid();
  Vector v = r.complex_payload(g.size());
  r.finish();
  s.psi = WaveFunction(g, std::move(v));
  return s;
}

template <class T>
void save_snapshot(const T& state, const std::filesystem::path& path) {
  atomic_write(path, encode_snapshot(state));
}

template <class T>
T load_snapshot(const std::filesystem::path& path) {
  return decode_snapshot<T>(read_file(path));
}

/// Ψ from either a wave-function or an Ehrenfest snapshot (cross-method reuse).
inline WaveFunction load_wave_function(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (snapshot_type(bytes) == SnapshotType::Ehrenfest) return decode_snapshot<EhrenfestState>(bytes).psi;
  return decode_snapshot<WaveFunction>(bytes);
}

}  // namespace qcsim::io
