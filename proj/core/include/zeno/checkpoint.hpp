#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "zeno/geometry.hpp"
#include "zeno/wavefunction.hpp"

namespace zeno {

/// Binary wavefunction checkpoint, little-endian:
///
///   offset  size  field
///        0     4  magic "ZCWF"
///        4     4  u32 format version (1)
///        8     4  u32 N
///       12     4  u32 reserved (0)
///       16     8  f64 L (m)
///       24     8  f64 d (m)
///       32     8  f64 epsilon (m)
///       40     8  f64 length scale (m)
///       48     8  f64 mass scale (kg)
///       56    32  f64 q1, q2 (C), m1, m2 (kg)
///       88     8  u64 FNV-1a 64 checksum of the payload
///       96  16N^2 payload: (re, im) f64 pairs, row-major over the full square,
///                 zero outside the state's support
struct CheckpointMetadata {
  int points_per_axis = 0;
  double plate_separation = 0.0;
  double d = 0.0;
  double epsilon = 0.0;
  double length_scale = 0.0;
  double mass_scale = 0.0;
  ChargeConfig charges{};
};

inline constexpr std::uint32_t checkpoint_version = 1;
inline constexpr std::size_t checkpoint_header_size = 96;
/// Largest payload save/load will handle (16 N^2 bytes).
inline constexpr std::uint64_t checkpoint_max_payload = 1ULL << 30;

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size,
                      std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept;

/// Throws IoError when the destination cannot be written and ValidationError
/// when the payload would exceed checkpoint_max_payload.
void save_checkpoint(const Wavefunction& psi, const CheckpointMetadata& meta, const std::string& path);

/// Loads a checkpoint onto a full-square support. With `expected_points`,
/// a different N raises ShapeError. Other failures: MalformedInputError (empty
/// or truncated), IntegrityError (magic or checksum), UnsupportedVersionError.
std::pair<Wavefunction, CheckpointMetadata> load_checkpoint(
    const std::string& path, std::optional<int> expected_points = std::nullopt);

}  // namespace zeno
