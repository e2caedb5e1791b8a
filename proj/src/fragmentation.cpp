#include "dgrid/fragmentation.hpp"

#include <algorithm>
#include <map>

#include "dgrid/error.hpp"

namespace dgrid {

SchemeReport check_scheme(const FragmentationScheme& scheme) {
  std::vector<ByteRange> sorted = scheme.ranges;
  std::sort(sorted.begin(), sorted.end(),
            [](const ByteRange& a, const ByteRange& b) {
              return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
            });

  SchemeReport report{true, true};
  std::uint64_t covered = 0;  // [0, covered) is covered so far
  std::uint64_t max_end = 0;
  bool any = false;
  for (const auto& r : sorted) {
    if (r.begin >= r.end) continue;  // empty ranges neither cover nor overlap
    if (any && r.begin < max_end) report.disjointness = false;
    if (r.begin > covered) report.completeness = false;
    covered = std::max(covered, r.end);
    max_end = std::max(max_end, r.end);
    any = true;
  }
  if (covered != scheme.object_length) report.completeness = false;
  return report;
}

FragmentationScheme even_scheme(std::uint64_t length, int parts) {
  if (parts < 1 || parts > 255) throw SchemeError("fragment count must be in [1, 255]");
  if (length < static_cast<std::uint64_t>(parts))
    throw SchemeError("object shorter than the number of fragments");
  FragmentationScheme s{length, {}};
  const std::uint64_t base = length / static_cast<std::uint64_t>(parts);
  const std::uint64_t extra = length % static_cast<std::uint64_t>(parts);
  std::uint64_t pos = 0;
  for (int i = 0; i < parts; ++i) {
    const std::uint64_t len = base + (static_cast<std::uint64_t>(i) < extra ? 1 : 0);
    s.ranges.push_back({pos, pos + len});
    pos += len;
  }
  return s;
}

std::vector<Share> fragment(ByteView object, const FragmentationScheme& scheme) {
  if (scheme.object_length != object.size())
    throw SchemeError("scheme length " + std::to_string(scheme.object_length) +
                      " differs from object length " + std::to_string(object.size()));
  if (scheme.ranges.empty() || scheme.ranges.size() > 255)
    throw SchemeError("scheme must have between 1 and 255 ranges");
  for (const auto& r : scheme.ranges)
    if (r.begin >= r.end || r.end > scheme.object_length)
      throw SchemeError("range [" + std::to_string(r.begin) + ", " + std::to_string(r.end) +
                        ") is empty or out of bounds");
  const auto report = check_scheme(scheme);
  if (!report.completeness) throw SchemeError("scheme does not cover the object");
  if (!report.disjointness) throw SchemeError("scheme ranges overlap");

  std::vector<ByteRange> ordered = scheme.ranges;
  std::sort(ordered.begin(), ordered.end(),
            [](const ByteRange& a, const ByteRange& b) { return a.begin < b.begin; });

  const int count = static_cast<int>(ordered.size());
  const ObjectId id = object_id_of(object);
  std::vector<Share> out;
  for (int i = 0; i < count; ++i) {
    const ByteRange& r = ordered[static_cast<std::size_t>(i)];
    Share s;
    s.params = {count, count};
    s.index = i + 1;
    s.scheme = Scheme::fragment;
    s.object_id = id;
    s.original_length = object.size();
    s.payload.assign(object.begin() + static_cast<std::ptrdiff_t>(r.begin),
                     object.begin() + static_cast<std::ptrdiff_t>(r.end));
    out.push_back(std::move(s));
  }
  return out;
}

Bytes reassemble(std::span<const Share> fragments) {
  if (fragments.empty()) throw IncompletenessError("no fragments supplied");

  std::map<int, const Share*> by_index;
  for (const auto& f : fragments) {
    auto [it, inserted] = by_index.emplace(f.index, &f);
    if (!inserted && it->second->payload != f.payload)
      throw InconsistencyError("conflicting payloads for fragment " + std::to_string(f.index));
  }
  std::vector<Share> representatives;
  for (const auto& [index, share] : by_index) representatives.push_back(*share);
  const auto family = check_family(representatives, Scheme::fragment, /*allow_ragged=*/true);

  const int count = family.front()->params.n;
  if (static_cast<int>(family.size()) < count) {
    for (int i = 1; i <= count; ++i)
      if (!by_index.contains(i)) throw IncompletenessError("fragment " + std::to_string(i) + " missing");
  }

  Bytes out;
  out.reserve(family.front()->original_length);
  for (const Share* s : family) out.insert(out.end(), s->payload.begin(), s->payload.end());
  if (out.size() != family.front()->original_length)
    throw InconsistencyError("fragment lengths do not add up to the original length");
  verify_object_id(out, family.front()->object_id);
  return out;
}

}  // namespace dgrid
