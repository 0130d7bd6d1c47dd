// Copyright 2026 The clinvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clinvec/cooc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "clinvec/error.hpp"

namespace clinvec {

namespace {

std::uint64_t Key(std::uint32_t lo, std::uint32_t hi) {
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

CoocMatrix AccumulateShard(std::span<const Document> documents, const Vocabulary& vocab,
                           const CoocOptions& options) {
  // Keyed by (min, max); mirrored on expansion.
  std::unordered_map<std::uint64_t, double> upper;
  std::vector<std::optional<std::uint32_t>> ids;
  for (const auto& doc : documents) {
    ids = EncodeDocument(doc, vocab);
    const std::size_t len = ids.size();
    for (std::size_t p = 0; p < len; ++p) {
      if (!ids[p]) continue;
      const std::size_t last = std::min(len - 1, p + static_cast<std::size_t>(options.window));
      for (std::size_t q = p + 1; q <= last; ++q) {
        if (!ids[q]) continue;
        const double w = options.weighting == Weighting::kInverseDistance
                             ? 1.0 / static_cast<double>(q - p)
                             : 1.0;
        const std::uint32_t a = *ids[p];
        const std::uint32_t b = *ids[q];
        double& slot = upper[Key(std::min(a, b), std::max(a, b))];
        slot += w;
        // A repeated term lands on the diagonal from both sides.
        if (a == b) slot += w;
      }
    }
  }
  std::vector<CoocEntry> entries;
  entries.reserve(2 * upper.size());
  for (const auto& [key, x] : upper) {
    const auto lo = static_cast<std::uint32_t>(key >> 32);
    const auto hi = static_cast<std::uint32_t>(key & 0xffffffffu);
    entries.push_back({lo, hi, x});
    if (lo != hi) entries.push_back({hi, lo, x});
  }
  std::sort(entries.begin(), entries.end(), [](const CoocEntry& l, const CoocEntry& r) {
    return l.i != r.i ? l.i < r.i : l.j < r.j;
  });
  return CoocMatrix::FromEntries(vocab.size(), options.window, options.weighting,
                                 std::move(entries));
}

}  // namespace

std::string_view WeightingName(Weighting weighting) {
  return weighting == Weighting::kInverseDistance ? "inverse_distance" : "uniform";
}

Weighting ParseWeighting(std::string_view name) {
  if (name == "inverse_distance") return Weighting::kInverseDistance;
  if (name == "uniform") return Weighting::kUniform;
  throw UsageError("unknown weighting '" + std::string(name) +
                   "' (expected inverse_distance or uniform)");
}

CoocMatrix CoocMatrix::FromEntries(std::size_t dimension, int window, Weighting weighting,
                                   std::vector<CoocEntry> entries) {
  CoocMatrix m(dimension, window, weighting);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.i >= dimension || e.j >= dimension) {
      throw DataError("co-occurrence entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                      ") outside dimension " + std::to_string(dimension));
    }
    if (!(e.x > 0.0) || !std::isfinite(e.x)) {
      throw DataError("co-occurrence entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                      ") is not a positive finite count");
    }
    if (k > 0) {
      const auto& p = entries[k - 1];
      if (!(p.i < e.i || (p.i == e.i && p.j < e.j))) {
        throw DataError("co-occurrence entries not strictly sorted by (i, j)");
      }
    }
  }
  m.entries_ = std::move(entries);
  for (const auto& e : m.entries_) {
    if (m.Value(e.j, e.i) != e.x) {
      throw DataError("co-occurrence matrix is not symmetric at (" + std::to_string(e.i) + ", " +
                      std::to_string(e.j) + ")");
    }
  }
  return m;
}

double CoocMatrix::Value(std::uint32_t i, std::uint32_t j) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), CoocEntry{i, j, 0.0},
      [](const CoocEntry& l, const CoocEntry& r) { return l.i != r.i ? l.i < r.i : l.j < r.j; });
  if (it == entries_.end() || it->i != i || it->j != j) return 0.0;
  return it->x;
}

double CoocMatrix::TotalMass() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.x;
  return total;
}

CoocMatrix Accumulate(std::span<const Document> documents, const Vocabulary& vocab,
                      const CoocOptions& options) {
  if (options.window < 1) throw UsageError("co-occurrence window must be >= 1");
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1,
                              std::max<std::size_t>(documents.size(), 1));
  if (threads == 1) return AccumulateShard(documents, vocab, options);

  std::vector<CoocMatrix> shards(threads);
  std::vector<std::thread> workers;
  const std::size_t per = (documents.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(documents.size(), t * per);
    const std::size_t end = std::min(documents.size(), begin + per);
    workers.emplace_back([&, t, begin, end] {
      shards[t] = AccumulateShard(documents.subspan(begin, end - begin), vocab, options);
    });
  }
  for (auto& w : workers) w.join();
  CoocMatrix total = std::move(shards.front());
  for (std::size_t t = 1; t < threads; ++t) total = Merge(total, shards[t]);
  return total;
}

CoocMatrix Merge(const CoocMatrix& a, const CoocMatrix& b) {
  if (a.dimension() != b.dimension() || a.window() != b.window() ||
      a.weighting() != b.weighting()) {
    throw UsageError("cannot merge co-occurrence matrices with different parameters");
  }
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::vector<CoocEntry> out;
  out.reserve(ea.size() + eb.size());
  std::size_t p = 0, q = 0;
  while (p < ea.size() || q < eb.size()) {
    if (q == eb.size() || (p < ea.size() && (ea[p].i < eb[q].i ||
                                             (ea[p].i == eb[q].i && ea[p].j < eb[q].j)))) {
      out.push_back(ea[p++]);
    } else if (p == ea.size() || eb[q].i < ea[p].i ||
               (eb[q].i == ea[p].i && eb[q].j < ea[p].j)) {
      out.push_back(eb[q++]);
    } else {
      out.push_back({ea[p].i, ea[p].j, ea[p].x + eb[q].x});
      ++p;
      ++q;
    }
  }
  return CoocMatrix::FromEntries(a.dimension(), a.window(), a.weighting(), std::move(out));
}

namespace {

template <typename T>
void PutLe(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
bool GetLe(std::istream& in, T& value) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) return false;
  std::memcpy(&value, buf, sizeof(T));
  return true;
}

}  // namespace

void WriteCoocBinary(std::ostream& out, const CoocMatrix& m) {
  for (const auto& e : m.entries()) {
    PutLe(out, e.i);
    PutLe(out, e.j);
    PutLe(out, e.x);
  }
}

CoocMatrix ReadCoocBinary(std::istream& in, std::size_t dimension, int window,
                          Weighting weighting) {
  std::vector<CoocEntry> entries;
  CoocEntry e;
  while (GetLe(in, e.i)) {
    if (!GetLe(in, e.j) || !GetLe(in, e.x)) throw DataError("truncated co-occurrence record");
    entries.push_back(e);
  }
  return CoocMatrix::FromEntries(dimension, window, weighting, std::move(entries));
}

void WriteCoocText(std::ostream& out, const CoocMatrix& m) {
  char buf[64];
  for (const auto& e : m.entries()) {
    std::snprintf(buf, sizeof(buf), "%u %u %.17g\n", e.i, e.j, e.x);
    out << buf;
  }
}

}  // namespace clinvec
