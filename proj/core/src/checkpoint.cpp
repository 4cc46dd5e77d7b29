#include "zeno/checkpoint.hpp"

#include <cstring>
#include <type_traits>
#include <fstream>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

template <class T>
void put(std::vector<unsigned char>& out, T v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U u;
  std::memcpy(&u, &v, sizeof u);
  for (std::size_t b = 0; b < sizeof u; ++b) out.push_back(static_cast<unsigned char>(u >> (8 * b)));
}

template <class T>
T get(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U u = 0;
  for (std::size_t b = 0; b < sizeof u; ++b) u |= static_cast<U>(p[b]) << (8 * b);
  T v;
  std::memcpy(&v, &u, sizeof v);
  return v;
}

std::uint64_t payload_bytes(std::uint64_t n) { return 16ULL * n * n; }

}  // namespace

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size, std::uint64_t hash) noexcept {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void save_checkpoint(const Wavefunction& psi, const CheckpointMetadata& meta, const std::string& path) {
  const int n = psi.grid().points_per_axis();
  if (meta.points_per_axis != n) throw ShapeError("metadata N does not match the wavefunction grid");
  if (payload_bytes(static_cast<std::uint64_t>(n)) > checkpoint_max_payload) {
    throw ValidationError("full-square payload too large for a checkpoint", "points_per_axis");
  }

  std::vector<unsigned char> payload;
  payload.reserve(static_cast<std::size_t>(payload_bytes(static_cast<std::uint64_t>(n))));
  std::int64_t k = 0;
  const NodeSet& s = psi.support();
  for (int i = 0; i < n; ++i) {
    int j = 0;
    for (const Run& r : s.row_runs(i)) {
      for (; j < r.begin; ++j) {
        put(payload, 0.0);
        put(payload, 0.0);
      }
      k = r.offset;
      for (; j < r.end; ++j, ++k) {
        const Complex z = psi.amplitudes()[static_cast<std::size_t>(k)];
        put(payload, z.real());
        put(payload, z.imag());
      }
    }
    for (; j < n; ++j) {
      put(payload, 0.0);
      put(payload, 0.0);
    }
  }

  std::vector<unsigned char> header;
  header.insert(header.end(), {'Z', 'C', 'W', 'F'});
  put(header, checkpoint_version);
  put(header, static_cast<std::uint32_t>(n));
  put(header, std::uint32_t{0});
  put(header, meta.plate_separation);
  put(header, meta.d);
  put(header, meta.epsilon);
  put(header, meta.length_scale);
  put(header, meta.mass_scale);
  put(header, meta.charges.q1);
  put(header, meta.charges.q2);
  put(header, meta.charges.m1);
  put(header, meta.charges.m2);
  put(header, fnv1a64(payload.data(), payload.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write to " + path + " failed");
}

std::pair<Wavefunction, CheckpointMetadata> load_checkpoint(const std::string& path,
                                                            std::optional<int> expected_points) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  unsigned char h[checkpoint_header_size];
  in.read(reinterpret_cast<char*>(h), sizeof h);
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got == 0) throw MalformedInputError(path + " is empty");
  if (got < 4 || std::memcmp(h, "ZCWF", 4) != 0) throw IntegrityError(path + " is not a wavefunction checkpoint");
  if (got < checkpoint_header_size) throw MalformedInputError(path + " has a truncated header");

  const auto version = get<std::uint32_t>(h + 4);
  if (version != checkpoint_version) {
    throw UnsupportedVersionError("unsupported checkpoint version " + std::to_string(version), version);
  }
  CheckpointMetadata meta;
  const auto n = get<std::uint32_t>(h + 8);
  meta.plate_separation = get<double>(h + 16);
  meta.d = get<double>(h + 24);
  meta.epsilon = get<double>(h + 32);
  meta.length_scale = get<double>(h + 40);
  meta.mass_scale = get<double>(h + 48);
  meta.charges = {get<double>(h + 56), get<double>(h + 64), get<double>(h + 72), get<double>(h + 80)};
  const auto checksum = get<std::uint64_t>(h + 88);

  if (n < static_cast<std::uint32_t>(Grid2D::min_points) || payload_bytes(n) > checkpoint_max_payload) {
    throw MalformedInputError(path + " declares an invalid grid size");
  }
  meta.points_per_axis = static_cast<int>(n);
  if (expected_points && *expected_points != meta.points_per_axis) {
    throw ShapeError("checkpoint has N = " + std::to_string(n) + ", expected " + std::to_string(*expected_points));
  }

  std::vector<unsigned char> payload(static_cast<std::size_t>(payload_bytes(n)));
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) throw MalformedInputError(path + " has a truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw MalformedInputError(path + " has trailing bytes");
  if (fnv1a64(payload.data(), payload.size()) != checksum) throw IntegrityError(path + " failed its checksum");

  std::vector<Complex> amps(static_cast<std::size_t>(n) * n);
  for (std::size_t k = 0; k < amps.size(); ++k) {
    amps[k] = {get<double>(payload.data() + 16 * k), get<double>(payload.data() + 16 * k + 8)};
  }
  if (!(meta.plate_separation > 0.0)) throw MalformedInputError(path + " has a non-positive plate separation");
  const Grid2D grid(meta.plate_separation, meta.points_per_axis);
  auto support = std::make_shared<const NodeSet>(NodeSet::full(meta.points_per_axis));
  return {Wavefunction(grid, std::move(support), std::move(amps)), meta};
}

}  // namespace zeno
