#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenrec/tensor.hpp"

namespace tenrec {

/// Random-valued impulse noise: a fixed count of spatial positions,
/// round(rate * n1 * n2), gets replaced by uniform draws in value_range.
/// channel_coupled replaces every mode-3 entry at a chosen position;
/// otherwise positions are drawn independently per slice.
struct NoiseSpec {
  double rate = 0.0;
  std::uint64_t seed = 0;
  double low = 0.0;
  double high = 255.0;
  bool channel_coupled = true;

  /// Throws InvalidConfig unless 0 <= rate <= 1 and low < high.
  void validate() const;
};

struct NoiseResult {
  Tensor3 corrupted;
  Tensor3 mask;  // 1 at corrupted entries, 0 elsewhere
};

/// Deterministic for a given (x, spec): the generator is mt19937_64 seeded
/// with spec.seed; positions come from a partial Fisher-Yates shuffle with
/// rejection-sampled bounded draws, values from (word >> 11) * 2^-53 mapped
/// onto [low, high). Spatial position s maps to (i, j) = (s mod n1, s div n1).
NoiseResult inject_noise(const Tensor3& x, const NoiseSpec& spec);

/// PNG (8-bit gray/RGB/palette, alpha stripped) or binary PGM by extension.
/// Gray loads as n1 x n2 x 1, color as n1 x n2 x 3, values in [0, 255].
Tensor3 load_image(const std::string& path);

/// Stacks single-channel frames along mode 3 in list order.
Tensor3 load_video(const std::vector<std::string>& paths);

/// Raw tensor file: magic "T3RC", three little-endian u32 dims, then
/// n1*n2*n3 little-endian f64 values with i fastest, then j, then k.
Tensor3 load_raw(const std::string& path);

/// Clamps to [0, 255] and rounds to integers on export. One slice writes
/// gray, three write RGB; PGM accepts gray only.
void save_image(const Tensor3& t, const std::string& path);

/// Writes one PGM frame per slice; pattern must contain a "%d"-style field
/// for the frame number (e.g. "frame_%03d.pgm").
void save_video(const Tensor3& t, const std::string& pattern);

void save_raw(const Tensor3& t, const std::string& path);

}  // namespace tenrec
