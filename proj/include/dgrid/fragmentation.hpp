#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgrid/share.hpp"

namespace dgrid {

/// Half-open byte interval [begin, end).
struct ByteRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

struct FragmentationScheme {
  std::uint64_t object_length = 0;
  std::vector<ByteRange> ranges;
};

struct SchemeReport {
  bool completeness = false;  // ranges cover [0, object_length) exactly
  bool disjointness = false;  // no two ranges overlap

  bool ok() const { return completeness && disjointness; }
};

SchemeReport check_scheme(const FragmentationScheme& scheme);

/// `parts` near-equal consecutive ranges covering [0, length).
FragmentationScheme even_scheme(std::uint64_t length, int parts);

/// One share per range. Indices follow the ranges' order by start offset,
/// which is the only ordering reassemble() can recover from headers alone.
/// Throws SchemeError when the scheme is incomplete, overlapping, has empty
/// or out-of-bounds ranges, more than 255 ranges, or mismatches the object.
std::vector<Share> fragment(ByteView object, const FragmentationScheme& scheme);

/// Concatenates one representative per index. Replicas of the same index are
/// accepted if identical. Throws IncompletenessError for a missing index and
/// InconsistencyError for conflicting replicas or mixed families.
Bytes reassemble(std::span<const Share> fragments);

}  // namespace dgrid
