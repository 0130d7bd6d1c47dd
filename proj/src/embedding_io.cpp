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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "clinvec/error.hpp"
#include "clinvec/glove.hpp"
#include "clinvec/simd/kernels.hpp"

namespace clinvec {

namespace {

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::vector<std::string> tokens, std::size_t dim,
                           std::vector<double> vectors, EmbeddingProvenance provenance)
    : tokens_(std::move(tokens)),
      dim_(dim),
      vectors_(std::move(vectors)),
      provenance_(std::move(provenance)) {
  if (vectors_.size() != tokens_.size() * dim_) {
    throw DataError("embedding matrix shape does not match its token list");
  }
  for (double v : vectors_) {
    if (!std::isfinite(v)) throw NumericalError("embedding contains a non-finite value");
  }
  for (std::size_t k = 0; k < tokens_.size(); ++k) {
    if (!index_.emplace(tokens_[k], k).second) {
      throw DataError("duplicate embedding term " + tokens_[k]);
    }
  }
}

std::optional<std::size_t> EmbeddingSet::Find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(simd::Dot(a, a));
  const double nb = std::sqrt(simd::Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return simd::Dot(a, b) / (na * nb);
}

std::vector<Neighbor> NearestNeighbors(const EmbeddingSet& emb, std::string_view token,
                                       std::size_t k) {
  const auto query = emb.Find(token);
  if (!query) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& t : emb.tokens()) scored.emplace_back(EditDistance(token, t), t);
    std::sort(scored.begin(), scored.end());
    std::string what = "unknown term '" + std::string(token) + "'";
    if (!scored.empty()) {
      what += "; closest matches:";
      for (std::size_t m = 0; m < std::min<std::size_t>(5, scored.size()); ++m) {
        what += " " + scored[m].second;
      }
    }
    throw DataError(what);
  }
  if (k >= emb.size()) {
    throw UsageError("k must be smaller than the vocabulary size (" + std::to_string(emb.size()) +
                     ")");
  }
  const auto q = emb.Row(*query);
  const double qnorm = std::sqrt(simd::Dot(q, q));
  std::vector<Neighbor> all;
  all.reserve(emb.size() - 1);
  for (std::size_t r = 0; r < emb.size(); ++r) {
    if (r == *query) continue;
    const auto v = emb.Row(r);
    const double vnorm = std::sqrt(simd::Dot(v, v));
    const double sim = (qnorm == 0.0 || vnorm == 0.0) ? 0.0 : simd::Dot(q, v) / (qnorm * vnorm);
    all.push_back({emb.tokens()[r], sim});
  }
  auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.token < b.token;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
  all.resize(k);
  return all;
}

void WriteEmbeddings(std::ostream& out, const EmbeddingSet& emb) {
  out << emb.size() << ' ' << emb.dim() << '\n';
  char buf[32];
  for (std::size_t r = 0; r < emb.size(); ++r) {
    out << emb.tokens()[r];
    for (double v : emb.Row(r)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

EmbeddingSet ReadEmbeddings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t n = 0, dim = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> n >> dim)) {
    throw DataError(source + ": line 1: expected '|V| d' header");
  }
  std::vector<std::string> tokens;
  std::vector<double> vectors;
  tokens.reserve(n);
  vectors.reserve(n * dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const char* space = std::find(p, end, ' ');
    tokens.emplace_back(p, space);
    p = space;
    std::size_t got = 0;
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) {
        throw DataError(source + ": line " + std::to_string(line_no) + ": bad number");
      }
      vectors.push_back(v);
      ++got;
      p = res.ptr;
    }
    if (got != dim) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(got));
    }
  }
  if (tokens.size() != n) {
    throw DataError(source + ": header promises " + std::to_string(n) + " terms, found " +
                    std::to_string(tokens.size()));
  }
  return EmbeddingSet(std::move(tokens), dim, std::move(vectors));
}

void WriteLossTrace(std::ostream& out, std::span<const double> trace) {
  out << "epoch,loss\n";
  char buf[32];
  for (std::size_t e = 0; e < trace.size(); ++e) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), trace[e]);
    out << (e + 1) << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  }
}

}  // namespace clinvec
