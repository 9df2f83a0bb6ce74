#include "media_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tenrec/errors.hpp"
#include "tenrec/media.hpp"

namespace tenrec::cli {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suffix;
}

void check_pattern(const std::string& pattern) {
  const std::size_t pct = pattern.find('%');
  bool ok = pct != std::string::npos;
  if (ok) {
    std::size_t pos = pct + 1;
    while (pos < pattern.size() &&
           std::isdigit(static_cast<unsigned char>(pattern[pos]))) {
      ++pos;
    }
    ok = pos < pattern.size() && pattern[pos] == 'd' &&
         pattern.find('%', pct + 1) == std::string::npos;
  }
  if (!ok) {
    throw FormatError("frame pattern needs exactly one %d field: " + pattern);
  }
}

}  // namespace

MediaKind classify_path(const std::string& path) {
  if (path.find('%') != std::string::npos) return MediaKind::VideoPattern;
  if (has_suffix(path, ".t3rc")) return MediaKind::RawTensor;
  if (has_suffix(path, ".png") || has_suffix(path, ".pgm")) {
    return MediaKind::Image;
  }
  throw FormatError("unsupported path (want .t3rc, .png, .pgm, or a %d frame pattern): " +
                    path);
}

std::vector<std::string> expand_pattern(const std::string& pattern,
                                        Index frames) {
  check_pattern(pattern);
  std::vector<std::string> paths;
  paths.reserve(static_cast<std::size_t>(frames));
  for (Index k = 0; k < frames; ++k) {
    char buf[4096];
    std::snprintf(buf, sizeof(buf), pattern.c_str(), static_cast<int>(k));
    paths.emplace_back(buf);
  }
  return paths;
}

Tensor3 load_any(const std::string& path, Index frames) {
  switch (classify_path(path)) {
    case MediaKind::RawTensor:
      return load_raw(path);
    case MediaKind::Image:
      return load_image(path);
    case MediaKind::VideoPattern:
      break;
  }
  if (frames < 1) {
    std::ostringstream msg;
    msg << "frame pattern " << path << " needs --frames >= 1, got " << frames;
    throw InvalidConfig(msg.str());
  }
  return load_video(expand_pattern(path, frames));
}

void save_any(const Tensor3& t, const std::string& path) {
  switch (classify_path(path)) {
    case MediaKind::RawTensor:
      save_raw(t, path);
      return;
    case MediaKind::Image:
      save_image(t, path);
      return;
    case MediaKind::VideoPattern:
      save_video(t, path);
      return;
  }
}

Tensor3 resize(const Tensor3& x, double scale, const std::string& filter) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    std::ostringstream msg;
    msg << "resize scale must be positive, got " << scale;
    throw InvalidConfig(msg.str());
  }
  const bool nearest = filter == "nearest";
  if (!nearest && filter != "bilinear") {
    throw InvalidConfig("resize filter must be nearest or bilinear, got " +
                        filter);
  }
  if (scale == 1.0) return x;

  const Index m1 = std::max<Index>(1, std::llround(scale * static_cast<double>(x.n1())));
  const Index m2 = std::max<Index>(1, std::llround(scale * static_cast<double>(x.n2())));
  const double inv1 = static_cast<double>(x.n1()) / static_cast<double>(m1);
  const double inv2 = static_cast<double>(x.n2()) / static_cast<double>(m2);

  auto clamp_idx = [](double v, Index n) {
    return std::min<Index>(n - 1, std::max<Index>(0, static_cast<Index>(v)));
  };

  Tensor3 out(m1, m2, x.n3());
  for (Index k = 0; k < x.n3(); ++k) {
    for (Index j = 0; j < m2; ++j) {
      const double sj = (static_cast<double>(j) + 0.5) * inv2 - 0.5;
      for (Index i = 0; i < m1; ++i) {
        const double si = (static_cast<double>(i) + 0.5) * inv1 - 0.5;
        if (nearest) {
          out(i, j, k) = x(clamp_idx(std::llround(si), x.n1()),
                           clamp_idx(std::llround(sj), x.n2()), k);
          continue;
        }
        const double fi = std::floor(si), fj = std::floor(sj);
        const double wi = si - fi, wj = sj - fj;
        const Index i0 = clamp_idx(fi, x.n1()), i1 = clamp_idx(fi + 1, x.n1());
        const Index j0 = clamp_idx(fj, x.n2()), j1 = clamp_idx(fj + 1, x.n2());
        out(i, j, k) = (1 - wi) * (1 - wj) * x(i0, j0, k) +
                       wi * (1 - wj) * x(i1, j0, k) +
                       (1 - wi) * wj * x(i0, j1, k) +
                       wi * wj * x(i1, j1, k);
      }
    }
  }
  return out;
}

}  // namespace tenrec::cli
