#pragma once

#include <algorithm>
#include <vector>

#include "sgq/graph.hpp"

namespace sgq {

// Galloping (doubling) search threshold: when one side is this many times
// longer than the other, binary probing beats a linear merge.
constexpr size_t kGallopRatio = 32;

// In-tandem intersection of two sorted runs into `out` (cleared first).
inline void intersect_pair(const VertexId* a, size_t alen, const VertexId* b, size_t blen,
                           std::vector<VertexId>& out) {
  out.clear();
  if (alen == 0 || blen == 0) return;
  if (alen > blen) {
    std::swap(a, b);
    std::swap(alen, blen);
  }
  if (blen / alen >= kGallopRatio) {
    const VertexId* lo = b;
    const VertexId* bend = b + blen;
    for (size_t i = 0; i < alen; ++i) {
      lo = std::lower_bound(lo, bend, a[i]);
      if (lo == bend) break;
      if (*lo == a[i]) out.push_back(a[i]);
    }
    return;
  }
  size_t i = 0, j = 0;
  while (i < alen && j < blen) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
}

// Iterative 2-way intersection of any number of sorted lists. A single list
// is returned unchanged. `out` and `scratch` are caller-owned reusable
// buffers.
inline void intersect(const std::vector<NeighborList>& lists, std::vector<VertexId>& out,
                      std::vector<VertexId>& scratch) {
  out.clear();
  if (lists.empty()) return;
  out.assign(lists[0].begin(), lists[0].end());
  for (size_t i = 1; i < lists.size() && !out.empty(); ++i) {
    intersect_pair(out.data(), out.size(), lists[i].ids, lists[i].len, scratch);
    std::swap(out, scratch);
  }
}

inline std::vector<VertexId> intersect(const std::vector<NeighborList>& lists) {
  std::vector<VertexId> out, scratch;
  intersect(lists, out, scratch);
  return out;
}

}  // namespace sgq
