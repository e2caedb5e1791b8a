#include "dgrid/share_format.hpp"

#include <algorithm>

#include "dgrid/erasure.hpp"
#include "dgrid/error.hpp"
#include "text.hpp"

namespace dgrid {
namespace {

constexpr std::uint8_t kMagic[4] = {'D', 'G', 'S', 'H'};

void put_be(Bytes& out, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(ByteView in, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | in[offset + static_cast<std::size_t>(i)];
  return v;
}

// Payload length implied by the header for each scheme.
void check_payload_length(Scheme scheme, const ShareParams& params, std::uint64_t original,
                          std::size_t payload) {
  bool ok = false;
  switch (scheme) {
    case Scheme::shamir:
      ok = original >= 1 && payload == original;
      break;
    case Scheme::rs_systematic:
    case Scheme::rs_sealed:
      ok = original >= 1 && payload == stripe_length(original, params.k);
      break;
    case Scheme::fragment:
      ok = payload >= 1 && payload <= original && (params.n > 1 || payload == original);
      break;
  }
  if (!ok)
    throw FormatError("original_length", "original length " + std::to_string(original) +
                                             " inconsistent with payload of " +
                                             std::to_string(payload) + " bytes");
}

void check_key_share_length(Scheme scheme, std::size_t len) {
  const std::size_t expected = scheme == Scheme::rs_sealed ? kSealedKeyBytes : 0;
  if (len != expected)
    throw FormatError("key_share_len", "expected " + std::to_string(expected) + " for scheme " +
                                           std::string(scheme_name(scheme)) + ", got " +
                                           std::to_string(len));
}

}  // namespace

Bytes write_share(const Share& s) {
  if (s.params.k < 1 || s.params.n > 255 || s.params.k > s.params.n)
    throw FormatError("k", "invalid (k, n) = (" + std::to_string(s.params.k) + ", " +
                               std::to_string(s.params.n) + ")");
  if (s.index < 1 || s.index > s.params.n) throw FormatError("index", "outside [1, n]");
  check_key_share_length(s.scheme, s.key_share.size());
  check_payload_length(s.scheme, s.params, s.original_length, s.payload.size());

  Bytes out;
  out.reserve(kShareHeaderBytes + s.key_share.size() + s.payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kShareFormatVersion);
  out.push_back(static_cast<std::uint8_t>(s.scheme));
  out.push_back(static_cast<std::uint8_t>(s.params.k));
  out.push_back(static_cast<std::uint8_t>(s.params.n));
  out.push_back(static_cast<std::uint8_t>(s.index));
  out.push_back(0);
  out.insert(out.end(), s.object_id.begin(), s.object_id.end());
  put_be(out, s.original_length, 8);
  put_be(out, s.key_share.size(), 2);
  out.insert(out.end(), s.key_share.begin(), s.key_share.end());
  out.insert(out.end(), s.payload.begin(), s.payload.end());
  return out;
}

Share read_share(ByteView in) {
  if (in.size() < kShareHeaderBytes)
    throw FormatError("truncated", "file shorter than the 36-byte header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), in.begin()))
    throw FormatError("magic", "not a DGSH share file");
  if (in[4] != kShareFormatVersion)
    throw FormatError("version", "unsupported version " + std::to_string(in[4]));
  if (in[5] < 1 || in[5] > 4) throw FormatError("scheme", "unknown scheme " + std::to_string(in[5]));

  Share s;
  s.scheme = static_cast<Scheme>(in[5]);
  s.params = {in[6], in[7]};
  s.index = in[8];
  if (s.params.k < 1) throw FormatError("k", "threshold must be at least 1");
  if (s.params.n < s.params.k) throw FormatError("n", "share count below threshold");
  if (s.index < 1 || s.index > s.params.n) throw FormatError("index", "outside [1, n]");
  if (in[9] != 0) throw FormatError("reserved", "reserved byte must be zero");
  if (s.scheme == Scheme::fragment && s.params.k != s.params.n)
    throw FormatError("k", "fragment families need every fragment (k = n)");

  std::copy_n(in.begin() + 10, 16, s.object_id.begin());
  s.original_length = get_be(in, 26, 8);
  const auto key_len = static_cast<std::size_t>(get_be(in, 34, 2));
  check_key_share_length(s.scheme, key_len);
  if (in.size() < kShareHeaderBytes + key_len)
    throw FormatError("truncated", "file ends inside the key share");

  const auto key_begin = in.begin() + kShareHeaderBytes;
  s.key_share.assign(key_begin, key_begin + static_cast<std::ptrdiff_t>(key_len));
  s.payload.assign(key_begin + static_cast<std::ptrdiff_t>(key_len), in.end());
  check_payload_length(s.scheme, s.params, s.original_length, s.payload.size());
  return s;
}

std::string render_manifest(const Manifest& m) {
  std::string out = "dgsh-manifest 1\n";
  out += "object " + to_hex(m.object_id) + "\n";
  out += "scheme " + std::string(scheme_name(m.scheme)) + "\n";
  out += "k " + std::to_string(m.params.k) + "\n";
  out += "n " + std::to_string(m.params.n) + "\n";
  for (const auto& f : m.share_files) out += "share " + f + "\n";
  return out;
}

Manifest parse_manifest(std::string_view text) {
  const auto lines = text::tokenize(text);
  if (lines.empty() || lines[0].words.size() != 2 || lines[0].words[0] != "dgsh-manifest" ||
      lines[0].words[1] != "1")
    throw ParseError(lines.empty() ? 1 : lines[0].number, "expected 'dgsh-manifest 1'");

  Manifest m;
  bool have_object = false, have_scheme = false, have_k = false, have_n = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const auto key = l.words[0];
    text::need_arity(l, 2, 2);
    if (key == "object") {
      auto id = object_id_from_hex(l.words[1]);
      if (!id) throw ParseError(l.number, "object id must be 32 hex digits");
      m.object_id = *id;
      have_object = true;
    } else if (key == "scheme") {
      auto s = scheme_from_name(l.words[1]);
      if (!s) throw ParseError(l.number, "unknown scheme '" + std::string(l.words[1]) + "'");
      m.scheme = *s;
      have_scheme = true;
    } else if (key == "k") {
      m.params.k = static_cast<int>(std::min<std::uint64_t>(text::need_u64(l, 1, "k"), 256));
      have_k = true;
    } else if (key == "n") {
      m.params.n = static_cast<int>(std::min<std::uint64_t>(text::need_u64(l, 1, "n"), 256));
      have_n = true;
    } else if (key == "share") {
      m.share_files.emplace_back(l.words[1]);
    } else {
      throw ParseError(l.number, "unknown manifest key '" + std::string(key) + "'");
    }
  }
  const std::size_t last = lines.back().number;
  if (!have_object || !have_scheme || !have_k || !have_n)
    throw ParseError(last, "manifest lacks one of object/scheme/k/n");
  if (m.params.k < 1 || m.params.k > m.params.n || m.params.n > 255)
    throw ParseError(last, "manifest has invalid (k, n)");
  return m;
}

}  // namespace dgrid
