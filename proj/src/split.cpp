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

#include "clinvec/split.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>
#include <tuple>

#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/rng.hpp"

namespace clinvec {

namespace {

struct Group {
  std::vector<std::size_t> members;
  int cases = 0;
  int controls = 0;
};

void OrderByComposition(std::vector<const Group*>& groups, Rng& rng) {
  rng.Shuffle(std::span<const Group*>(groups));
  std::stable_sort(groups.begin(), groups.end(), [](const Group* a, const Group* b) {
    return std::tie(a->cases, a->controls) < std::tie(b->cases, b->controls);
  });
}

}  // namespace

SplitPlan MakeSplit(std::span<const int> labels, std::span<const std::string> groups,
                    std::uint64_t seed, const SplitOptions& options) {
  if (labels.size() != groups.size()) throw UsageError("labels and groups differ in length");
  if (options.folds < 2 || options.test_period < 2) {
    throw UsageError("split needs folds >= 2 and test_period >= 2");
  }
  if (labels.size() < 24) throw DataError("split needs at least 24 samples");
  const auto n_pos = std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; });
  if (n_pos == 0 || n_pos == static_cast<std::ptrdiff_t>(labels.size())) {
    throw DataError("split needs both classes present");
  }

  std::map<std::string, Group> by_name;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    Group& g = by_name[groups[k]];
    g.members.push_back(k);
    (labels[k] != 0 ? g.cases : g.controls) += 1;
  }
  std::vector<const Group*> ordered;
  for (const auto& [name, g] : by_name) ordered.push_back(&g);

  Rng rng(seed);
  OrderByComposition(ordered, rng);
  SplitPlan plan;
  plan.seed = seed;
  std::vector<const Group*> train_groups;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    if (k % static_cast<std::size_t>(options.test_period) ==
        static_cast<std::size_t>(options.test_period - 1)) {
      plan.test.insert(plan.test.end(), ordered[k]->members.begin(), ordered[k]->members.end());
    } else {
      train_groups.push_back(ordered[k]);
    }
  }
  OrderByComposition(train_groups, rng);
  plan.folds.resize(static_cast<std::size_t>(options.folds));
  for (std::size_t k = 0; k < train_groups.size(); ++k) {
    auto& fold = plan.folds[k % plan.folds.size()];
    fold.insert(fold.end(), train_groups[k]->members.begin(), train_groups[k]->members.end());
  }
  for (auto& fold : plan.folds) {
    std::sort(fold.begin(), fold.end());
    plan.train.insert(plan.train.end(), fold.begin(), fold.end());
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

void CheckSplitHygiene(const SplitPlan& plan, std::span<const std::string> groups,
                       std::size_t n_samples) {
  std::vector<int> side(n_samples, 0);  // 1 train, 2 test
  for (std::size_t t : plan.train) {
    if (t >= n_samples || side[t] != 0) throw DataError("split: bad or repeated train index");
    side[t] = 1;
  }
  for (std::size_t t : plan.test) {
    if (t >= n_samples || side[t] != 0) throw DataError("split: test index also in train");
    side[t] = 2;
  }
  std::vector<int> fold_hits(n_samples, 0);
  for (const auto& fold : plan.folds) {
    for (std::size_t t : fold) {
      if (t >= n_samples || side[t] != 1) throw DataError("split: fold holds a non-train index");
      ++fold_hits[t];
    }
  }
  for (std::size_t t : plan.train) {
    if (fold_hits[t] != 1) throw DataError("split: folds do not partition the training set");
  }
  std::map<std::string_view, int> group_side;
  for (std::size_t k = 0; k < n_samples; ++k) {
    if (side[k] == 0) continue;
    auto [it, inserted] = group_side.emplace(groups[k], side[k]);
    if (!inserted && it->second != side[k]) {
      throw DataError("split: group '" + groups[k] + "' straddles train and test");
    }
  }
}

void WriteSplitPlan(std::ostream& out, const SplitPlan& plan,
                    std::span<const std::string> patient_ids) {
  std::vector<std::string> part(patient_ids.size());
  for (std::size_t t : plan.test) part[t] = "test";
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    for (std::size_t t : plan.folds[f]) part[t] = "fold" + std::to_string(f);
  }
  out << "patient_id,partition\n";
  for (std::size_t k = 0; k < patient_ids.size(); ++k) {
    if (!part[k].empty()) out << patient_ids[k] << ',' << part[k] << '\n';
  }
}

SplitPlan ReadSplitPlan(std::istream& in, std::span<const std::string> patient_ids,
                        const std::string& source) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t k = 0; k < patient_ids.size(); ++k) index.emplace(patient_ids[k], k);
  std::string line;
  if (!std::getline(in, line) || line != "patient_id,partition") {
    throw DataError(source + ": missing header 'patient_id,partition'");
  }
  SplitPlan plan;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    const std::string where = source + ": line " + std::to_string(line_no);
    if (fields.size() != 2) throw DataError(where + ": expected 2 fields");
    const auto it = index.find(fields[0]);
    if (it == index.end()) throw DataError(where + ": unknown patient '" + fields[0] + "'");
    if (fields[1] == "test") {
      plan.test.push_back(it->second);
    } else if (fields[1].rfind("fold", 0) == 0 && fields[1].size() > 4 &&
               std::all_of(fields[1].begin() + 4, fields[1].end(),
                           [](char c) { return c >= '0' && c <= '9'; })) {
      const std::size_t f = std::stoul(fields[1].substr(4));
      if (f >= 1000) throw DataError(where + ": fold index too large");
      if (plan.folds.size() <= f) plan.folds.resize(f + 1);
      plan.folds[f].push_back(it->second);
      plan.train.push_back(it->second);
    } else {
      throw DataError(where + ": bad partition '" + fields[1] + "'");
    }
  }
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

}  // namespace clinvec
