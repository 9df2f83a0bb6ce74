#pragma once

#include <string>
#include <vector>

#include "tenrec/tensor.hpp"

namespace tenrec::cli {

enum class MediaKind { RawTensor, Image, VideoPattern };

/// Paths containing a % field are frame patterns; otherwise the extension
/// decides (.t3rc raw, .png/.pgm image). Throws FormatError on anything else.
MediaKind classify_path(const std::string& path);

/// Numbered paths for a printf-style pattern with exactly one %d field,
/// frame indices counting from zero.
std::vector<std::string> expand_pattern(const std::string& pattern,
                                        Index frames);

/// frames is consulted only for video patterns, where it must be >= 1.
Tensor3 load_any(const std::string& path, Index frames);

void save_any(const Tensor3& t, const std::string& path);

/// Per-slice spatial resampling to round(scale * extent), filter is
/// "nearest" or "bilinear".
Tensor3 resize(const Tensor3& x, double scale, const std::string& filter);

}  // namespace tenrec::cli
