// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hedtts/common/error.hpp"

namespace hedtts {
namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

struct Parsed {
  WavInfo info;
  int format = 0;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
};

Parsed parse_header(const std::string& bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  require(bytes.size() >= 12 && std::memcmp(p, "RIFF", 4) == 0 && std::memcmp(p + 8, "WAVE", 4) == 0,
          ErrorCode::CorruptPayload, "not a RIFF/WAVE file");
  Parsed out;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(p + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      require(body + 16 <= bytes.size(), ErrorCode::CorruptPayload, "truncated fmt chunk");
      out.format = read_u16(p + body);
      out.info.channels = read_u16(p + body + 2);
      out.info.sample_rate = static_cast<int>(read_u32(p + body + 4));
      out.info.bits_per_sample = read_u16(p + body + 14);
      if (out.format == 0xFFFE && size >= 40) out.format = read_u16(p + body + 24);
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      require(have_fmt, ErrorCode::CorruptPayload, "data chunk before fmt chunk");
      out.data_offset = body;
      out.data_size = std::min<std::size_t>(size, bytes.size() - body);
      const int bytes_per_frame = out.info.channels * out.info.bits_per_sample / 8;
      require(bytes_per_frame > 0, ErrorCode::CorruptPayload, "invalid frame size");
      out.info.frames = out.data_size / static_cast<std::size_t>(bytes_per_frame);
      return out;
    }
    pos = body + size + (size & 1u);
  }
  fail(ErrorCode::CorruptPayload, "missing data chunk");
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingAudio, "cannot open audio file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingAudio, "cannot open audio file " + path.string());
  // Headers are small; read enough for fmt plus any leading LIST chunks.
  std::string head(1 << 16, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  Parsed parsed = parse_header(head);
  // data size may extend past the buffer we read
  in.clear();
  in.seekg(0, std::ios::end);
  const auto total = static_cast<std::size_t>(in.tellg());
  const auto* p = reinterpret_cast<const unsigned char*>(head.data());
  const std::uint32_t declared = read_u32(p + parsed.data_offset - 4);
  const std::size_t available = total - parsed.data_offset;
  const std::size_t data_size = std::min<std::size_t>(declared, available);
  const int bytes_per_frame = parsed.info.channels * parsed.info.bits_per_sample / 8;
  parsed.info.frames = data_size / static_cast<std::size_t>(bytes_per_frame);
  return parsed.info;
}

Waveform decode_wav(const std::string& bytes) {
  const Parsed parsed = parse_header(bytes);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + parsed.data_offset;
  const int channels = parsed.info.channels;
  const int bits = parsed.info.bits_per_sample;
  const bool is_float = parsed.format == 3;
  require(parsed.format == 1 || is_float, ErrorCode::CorruptPayload, "unsupported WAV encoding");
  require(!is_float || bits == 32, ErrorCode::CorruptPayload, "unsupported float WAV width");
  require(bits == 16 || bits == 24 || bits == 32, ErrorCode::CorruptPayload,
          "unsupported PCM width");

  Waveform wave;
  wave.sample_rate = parsed.info.sample_rate;
  wave.samples.resize(parsed.info.frames);
  const int width = bits / 8;
  for (std::uint64_t f = 0; f < parsed.info.frames; ++f) {
    double acc = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
      const unsigned char* s = p + (f * channels + ch) * width;
      double v = 0.0;
      if (is_float) {
        float x;
        std::uint32_t u = read_u32(s);
        std::memcpy(&x, &u, sizeof(x));
        v = x;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(read_u16(s)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t x = s[0] | (s[1] << 8) | (s[2] << 16);
        if (x & 0x800000) x |= ~0xffffff;
        v = x / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(read_u32(s)) / 2147483648.0;
      }
      acc += v;
    }
    wave.samples[f] = acc / channels;
  }
  return wave;
}

Waveform read_wav(const std::filesystem::path& path) { return decode_wav(slurp(path)); }

std::string encode_wav(const Waveform& wave) {
  const auto n = static_cast<std::uint32_t>(wave.samples.size());
  std::string out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  out.append("RIFF");
  put_u32(out, 36 + 2 * n);
  out.append("WAVEfmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.append("data");
  put_u32(out, 2 * n);
  for (double s : wave.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  const std::string bytes = encode_wav(wave);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace hedtts
