#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dgrid/share.hpp"

namespace dgrid {

/// On-disk share layout (`.dgsh`), all integers big-endian:
///
///   offset  size  field
///        0     4  magic "DGSH"
///        4     1  version (1)
///        5     1  scheme (1 shamir, 2 rs_systematic, 3 rs_sealed, 4 fragment)
///        6     1  k
///        7     1  n
///        8     1  index (1-based)
///        9     1  reserved (0)
///       10    16  object id
///       26     8  original length
///       34     2  key share length
///       36     -  key share bytes, then payload to end of file
constexpr std::size_t kShareHeaderBytes = 36;
constexpr std::uint8_t kShareFormatVersion = 1;

Bytes write_share(const Share& share);

/// Strict parse; throws FormatError naming the offending field.
Share read_share(ByteView bytes);

/// Text manifest tying a share family together.
struct Manifest {
  ObjectId object_id{};
  Scheme scheme = Scheme::shamir;
  ShareParams params;
  std::vector<std::string> share_files;  // relative to the manifest's directory

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

std::string render_manifest(const Manifest& m);
/// Throws ParseError with the failing line.
Manifest parse_manifest(std::string_view text);

}  // namespace dgrid
