#include "tenrec/media.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace tenrec {

namespace {

// --- seeded draws -----------------------------------------------------------
// All randomness below is a documented function of mt19937_64 output words,
// so fixtures are stable across platforms and standard library versions.

// Unbiased integer in [0, n) by rejecting draws below 2^64 mod n.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (~n + 1) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

// Uniform double in [0, 1) from the top 53 bits of one word.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// --- 8-bit conversion -------------------------------------------------------

unsigned char to_byte(double v) {
  const double clamped = std::min(255.0, std::max(0.0, v));
  return static_cast<unsigned char>(std::lround(clamped));
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suffix;
}

// --- PNG --------------------------------------------------------------------

Tensor3 read_png(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) throw IoError("cannot open " + path);

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    std::fclose(fp);
    throw FormatError("not a png file: " + path);
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::fclose(fp);
    throw IoError("png reader allocation failed");
  }

  std::vector<unsigned char> row;
  Tensor3 out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw FormatError("png decode failed: " + path);
  }

  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS) ||
      (png_get_color_type(png, info) & PNG_COLOR_MASK_ALPHA) != 0) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int channels = png_get_channels(png, info);
  if ((channels != 1 && channels != 3) || width == 0 || height == 0) {
    png_longjmp(png, 1);
  }

  out = Tensor3(static_cast<Index>(height), static_cast<Index>(width),
                channels);
  row.resize(static_cast<std::size_t>(width) * channels);
  for (png_uint_32 i = 0; i < height; ++i) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 j = 0; j < width; ++j) {
      for (int k = 0; k < channels; ++k) {
        out(static_cast<Index>(i), static_cast<Index>(j), k) =
            static_cast<double>(row[static_cast<std::size_t>(j) * channels +
                                    k]);
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return out;
}

void write_png(const Tensor3& t, const std::string& path) {
  if (t.n3() != 1 && t.n3() != 3) {
    std::ostringstream msg;
    msg << "png export needs 1 or 3 slices, tensor has " << t.n3();
    throw FormatError(msg.str());
  }
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) throw IoError("cannot open " + path + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    std::fclose(fp);
    throw IoError("png writer allocation failed");
  }

  std::vector<unsigned char> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("png encode failed: " + path);
  }

  png_init_io(png, fp);
  const int color =
      t.n3() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, static_cast<png_uint_32>(t.n2()),
               static_cast<png_uint_32>(t.n1()), 8, color,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const auto channels = static_cast<std::size_t>(t.n3());
  row.resize(static_cast<std::size_t>(t.n2()) * channels);
  for (Index i = 0; i < t.n1(); ++i) {
    for (Index j = 0; j < t.n2(); ++j) {
      for (Index k = 0; k < t.n3(); ++k) {
        row[static_cast<std::size_t>(j) * channels +
            static_cast<std::size_t>(k)] = to_byte(t(i, j, k));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw IoError("write failed: " + path);
}

// --- PGM (binary, 8-bit) ----------------------------------------------------

int next_pgm_token(std::istream& in) {
  for (;;) {
    const int c = in.get();
    if (c == '#') {
      while (in.good() && in.get() != '\n') {
      }
    } else if (!std::isspace(c)) {
      return c;
    }
    if (!in.good()) return -1;
  }
}

long read_pgm_number(std::istream& in) {
  int c = next_pgm_token(in);
  if (c < 0 || !std::isdigit(c)) return -1;
  long value = 0;
  while (c >= 0 && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1000000) return -1;
    c = in.get();
  }
  return value;
}

Tensor3 read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw FormatError("not a binary pgm file: " + path);
  }
  const long width = read_pgm_number(in);
  const long height = read_pgm_number(in);
  const long maxval = read_pgm_number(in);
  if (width <= 0 || height <= 0 || maxval <= 0) {
    throw FormatError("bad pgm header: " + path);
  }
  if (maxval > 255) {
    throw FormatError("16-bit pgm unsupported: " + path);
  }
  // the header terminates with exactly one whitespace byte, already consumed
  // by read_pgm_number
  std::vector<unsigned char> data(static_cast<std::size_t>(width) *
                                  static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw FormatError("truncated pgm data: " + path);
  }
  Tensor3 out(height, width, 1);
  for (long i = 0; i < height; ++i) {
    for (long j = 0; j < width; ++j) {
      out(i, j, 0) = static_cast<double>(
          data[static_cast<std::size_t>(i) * width + j]);
    }
  }
  return out;
}

void write_pgm(const Tensor3& t, const std::string& path) {
  if (t.n3() != 1) {
    std::ostringstream msg;
    msg << "pgm export needs exactly 1 slice, tensor has " << t.n3();
    throw FormatError(msg.str());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << t.n2() << " " << t.n1() << "\n255\n";
  std::vector<unsigned char> data(static_cast<std::size_t>(t.n1() * t.n2()));
  for (Index i = 0; i < t.n1(); ++i) {
    for (Index j = 0; j < t.n2(); ++j) {
      data[static_cast<std::size_t>(i * t.n2() + j)] = to_byte(t(i, j, 0));
    }
  }
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

// --- raw tensor format ------------------------------------------------------

constexpr char kMagic[4] = {'T', '3', 'R', 'C'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) return false;
  v = static_cast<std::uint32_t>(b[0]) |
      (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) |
      (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

}  // namespace

void NoiseSpec::validate() const {
  std::ostringstream msg;
  if (!(rate >= 0.0 && rate <= 1.0)) {
    msg << "noise rate must lie in [0, 1], got " << rate;
  } else if (!(low < high)) {
    msg << "noise range [" << low << ", " << high << ") is empty";
  } else {
    return;
  }
  throw InvalidConfig(msg.str());
}

NoiseResult inject_noise(const Tensor3& x, const NoiseSpec& spec) {
  spec.validate();
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  const auto total = static_cast<std::uint64_t>(n1 * n2);
  const auto count = static_cast<std::uint64_t>(
      std::llround(spec.rate * static_cast<double>(total)));
  std::mt19937_64 rng(spec.seed);
  NoiseResult out{x, Tensor3::zeros(n1, n2, n3)};
  const double span = spec.high - spec.low;

  auto corrupt = [&](Index slice_begin, Index slice_end) {
    std::vector<std::uint64_t> positions(total);
    std::iota(positions.begin(), positions.end(), std::uint64_t{0});
    for (std::uint64_t t = 0; t < count; ++t) {
      std::swap(positions[t], positions[t + bounded_draw(rng, total - t)]);
      const auto s = static_cast<Index>(positions[t]);
      const Index i = s % n1;
      const Index j = s / n1;
      for (Index k = slice_begin; k < slice_end; ++k) {
        out.corrupted(i, j, k) = spec.low + span * unit_draw(rng);
        out.mask(i, j, k) = 1.0;
      }
    }
  };

  if (spec.channel_coupled) {
    corrupt(0, n3);
  } else {
    for (Index k = 0; k < n3; ++k) corrupt(k, k + 1);
  }
  return out;
}

Tensor3 load_image(const std::string& path) {
  if (has_suffix(path, ".png")) return read_png(path);
  if (has_suffix(path, ".pgm")) return read_pgm(path);
  throw FormatError("unsupported image extension: " + path);
}

Tensor3 load_video(const std::vector<std::string>& paths) {
  if (paths.empty()) throw IoError("empty frame list");
  std::vector<Tensor3> frames;
  frames.reserve(paths.size());
  for (const std::string& path : paths) {
    Tensor3 frame = load_image(path);
    if (frame.n3() != 1) {
      throw FormatError("video frames must be grayscale: " + path);
    }
    if (!frames.empty() && (frame.n1() != frames.front().n1() ||
                            frame.n2() != frames.front().n2())) {
      std::ostringstream msg;
      msg << "frame " << path << " is " << frame.n1() << "x" << frame.n2()
          << ", expected " << frames.front().n1() << "x"
          << frames.front().n2();
      throw InconsistentFrameSize(msg.str());
    }
    frames.push_back(std::move(frame));
  }
  Tensor3 out(frames.front().n1(), frames.front().n2(),
              static_cast<Index>(frames.size()));
  for (std::size_t k = 0; k < frames.size(); ++k) {
    out.slice(static_cast<Index>(k)) = frames[k].slice(0);
  }
  return out;
}

Tensor3 load_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic, not a raw tensor file: " + path);
  }
  std::uint32_t dims[3];
  for (std::uint32_t& d : dims) {
    if (!get_u32(in, d)) throw FormatError("truncated header: " + path);
    if (d == 0) throw FormatError("zero dimension in header: " + path);
  }
  const std::uint64_t n = static_cast<std::uint64_t>(dims[0]) * dims[1] *
                          dims[2];
  if (n > (std::uint64_t{1} << 31)) {
    throw FormatError("tensor dims unreasonably large: " + path);
  }
  std::vector<unsigned char> bytes(n * 8);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw FormatError("truncated values: " + path);
  }
  std::vector<double> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) {
      word = (word << 8) | bytes[i * 8 + static_cast<std::uint64_t>(b)];
    }
    values[i] = std::bit_cast<double>(word);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "non-finite value at offset " << i << ": " << path;
      throw FormatError(msg.str());
    }
  }
  return Tensor3::from_values(dims[0], dims[1], dims[2], std::move(values));
}

void save_image(const Tensor3& t, const std::string& path) {
  if (has_suffix(path, ".png")) {
    write_png(t, path);
  } else if (has_suffix(path, ".pgm")) {
    write_pgm(t, path);
  } else {
    throw FormatError("unsupported image extension: " + path);
  }
}

void save_video(const Tensor3& t, const std::string& pattern) {
  // accept exactly one %d-style field (optional zero-pad width), nothing else
  const std::size_t pct = pattern.find('%');
  bool ok = pct != std::string::npos;
  if (ok) {
    std::size_t pos = pct + 1;
    while (pos < pattern.size() && std::isdigit(
        static_cast<unsigned char>(pattern[pos]))) {
      ++pos;
    }
    ok = pos < pattern.size() && pattern[pos] == 'd' &&
         pattern.find('%', pct + 1) == std::string::npos;
  }
  if (!ok) {
    throw FormatError("frame pattern needs exactly one %d field: " + pattern);
  }
  for (Index k = 0; k < t.n3(); ++k) {
    char buf[4096];
    std::snprintf(buf, sizeof(buf), pattern.c_str(), static_cast<int>(k));
    Tensor3 frame(t.n1(), t.n2(), 1);
    frame.slice(0) = t.slice(k);
    save_image(frame, buf);
  }
}

void save_raw(const Tensor3& t, const std::string& path) {
  if (t.n1() > 0xffffffffLL || t.n2() > 0xffffffffLL ||
      t.n3() > 0xffffffffLL) {
    throw FormatError("tensor dims exceed the u32 header fields");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(t.n1()));
  put_u32(out, static_cast<std::uint32_t>(t.n2()));
  put_u32(out, static_cast<std::uint32_t>(t.n3()));
  std::vector<unsigned char> bytes(t.values().size() * 8);
  for (std::size_t i = 0; i < t.values().size(); ++i) {
    const auto word = std::bit_cast<std::uint64_t>(t.values()[i]);
    for (int b = 0; b < 8; ++b) {
      bytes[i * 8 + static_cast<std::size_t>(b)] =
          static_cast<unsigned char>((word >> (8 * b)) & 0xff);
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace tenrec
