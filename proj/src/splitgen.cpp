#include "noveval/splitgen.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "noveval/errors.hpp"
#include "noveval/rng.hpp"

namespace noveval {

std::string_view to_string(SampleTag tag) noexcept {
  return tag == SampleTag::train ? "train" : "test";
}

SampleTag parse_sample_tag(std::string_view text) {
  if (text == "train") return SampleTag::train;
  if (text == "test") return SampleTag::test;
  throw InvalidArgument("unknown sample tag '" + std::string(text) +
                        "' (expected train or test)");
}

std::string_view to_string(Side side) noexcept {
  return side == Side::base ? "base" : "novel";
}

std::string_view to_string(SplitMethod method) noexcept {
  switch (method) {
    case SplitMethod::random:
      return "random";
    case SplitMethod::stratified_random:
      return "stratified_random";
    case SplitMethod::semantic:
      return "semantic";
    case SplitMethod::builtin:
      return "builtin";
  }
  return "?";
}

std::string_view to_string(BuiltinKind kind) noexcept {
  return kind == BuiltinKind::random ? "random" : "semantic";
}

SplitMethod parse_split_method(std::string_view text) {
  for (auto m : {SplitMethod::random, SplitMethod::stratified_random,
                 SplitMethod::semantic, SplitMethod::builtin}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidArgument(
      "unknown split method '" + std::string(text) +
      "' (valid: random, stratified_random, semantic, builtin)");
}

BuiltinKind parse_builtin_kind(std::string_view text) {
  if (text == "random") return BuiltinKind::random;
  if (text == "semantic") return BuiltinKind::semantic;
  throw InvalidArgument("unknown split kind '" + std::string(text) +
                        "' (valid kinds: random, semantic)");
}

// --- ClassTaxonomy ---------------------------------------------------------

void ClassTaxonomy::validate() const {
  if (classes.empty()) {
    throw InvalidArgument("taxonomy '" + dataset_id + "' has no classes");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : classes) {
    if (name.empty()) {
      throw InvalidArgument("taxonomy '" + dataset_id +
                            "' contains an empty class name");
    }
    if (!seen.insert(name).second) {
      throw InvalidArgument("taxonomy '" + dataset_id +
                            "' lists class '" + name + "' twice");
    }
  }
  if (!groups) return;
  for (const auto& name : classes) {
    auto it = groups->find(name);
    if (it == groups->end()) {
      throw InvalidArgument("class '" + name + "' has no superclass");
    }
    if (it->second.empty()) {
      throw InvalidArgument("class '" + name + "' has an empty superclass");
    }
  }
  for (const auto& [name, group] : *groups) {
    if (!seen.contains(name)) {
      throw InvalidArgument("superclass map names unknown class '" + name +
                            "'");
    }
  }
}

std::vector<std::string> ClassTaxonomy::group_names() const {
  if (!groups) return {};
  std::set<std::string> names;
  for (const auto& [cls, group] : *groups) names.insert(group);
  return {names.begin(), names.end()};
}

std::vector<std::string> ClassTaxonomy::classes_in(
    std::string_view group) const {
  std::vector<std::string> out;
  if (!groups) return out;
  for (const auto& name : classes) {
    if (groups->at(name) == group) out.push_back(name);
  }
  return out;
}

// --- SplitSpec -------------------------------------------------------------

namespace {

bool sorted_contains(const std::vector<std::string>& v, std::string_view x) {
  return std::binary_search(v.begin(), v.end(), x, std::less<>{});
}

SplitSpec make_split(const ClassTaxonomy& taxonomy, SplitMethod method,
                     std::optional<std::uint64_t> seed,
                     const std::unordered_set<std::string>& base_set) {
  SplitSpec split;
  split.dataset_id = taxonomy.dataset_id;
  split.method = method;
  split.seed = seed;
  for (const auto& name : taxonomy.classes) {
    (base_set.contains(name) ? split.base : split.novel).push_back(name);
  }
  std::sort(split.base.begin(), split.base.end());
  std::sort(split.novel.begin(), split.novel.end());
  return split;
}

}  // namespace

Side SplitSpec::side_of(std::string_view label) const {
  if (sorted_contains(base, label)) return Side::base;
  if (sorted_contains(novel, label)) return Side::novel;
  throw UnknownLabel(std::string(label));
}

bool SplitSpec::contains(std::string_view label) const {
  return sorted_contains(base, label) || sorted_contains(novel, label);
}

std::string SplitSpec::descriptor() const {
  if (method == SplitMethod::builtin && kind) {
    return std::string(to_string(*kind));
  }
  std::string out(to_string(method));
  if (seed) out += "-s" + std::to_string(*seed);
  return out;
}

void SplitSpec::validate() const {
  if (base.empty() || novel.empty()) {
    throw InvalidArgument("split of '" + dataset_id +
                          "' must have non-empty base and novel sides");
  }
  for (const auto* side : {&base, &novel}) {
    if (!std::is_sorted(side->begin(), side->end()) ||
        std::adjacent_find(side->begin(), side->end()) != side->end()) {
      throw InvalidArgument("split class lists must be sorted and unique");
    }
  }
  for (const auto& name : base) {
    if (sorted_contains(novel, name)) {
      throw InvalidArgument("class '" + name + "' is both base and novel");
    }
  }
  if (method == SplitMethod::builtin && !kind) {
    throw InvalidArgument("builtin split is missing its kind");
  }
}

void SplitSpec::validate(const ClassTaxonomy& taxonomy) const {
  validate();
  if (base.size() + novel.size() != taxonomy.classes.size()) {
    throw InvalidArgument("split does not cover the taxonomy of '" +
                          taxonomy.dataset_id + "'");
  }
  for (const auto& name : taxonomy.classes) {
    if (!contains(name)) throw UnknownLabel(name);
  }
  if (method == SplitMethod::semantic && taxonomy.groups) {
    for (const auto& group : taxonomy.group_names()) {
      const auto members = taxonomy.classes_in(group);
      const auto first = side_of(members.front());
      for (const auto& m : members) {
        if (side_of(m) != first) {
          throw InvalidArgument("semantic split divides superclass '" +
                                group + "'");
        }
      }
    }
  }
}

// --- generators ------------------------------------------------------------

SplitSpec random_split(const ClassTaxonomy& taxonomy, std::size_t n_base,
                       std::uint64_t seed) {
  taxonomy.validate();
  const auto n = taxonomy.classes.size();
  if (n_base == 0 || n_base >= n) {
    throw InvalidArgument("n_base must be in [1, " + std::to_string(n - 1) +
                          "], got " + std::to_string(n_base));
  }
  auto order = taxonomy.classes;
  SplitRng rng(seed);
  rng.shuffle(order);
  const std::unordered_set<std::string> base(order.begin(),
                                             order.begin() + n_base);
  return make_split(taxonomy, SplitMethod::random, seed, base);
}

SplitSpec stratified_random_split(const ClassTaxonomy& taxonomy,
                                  std::size_t n_base, std::uint64_t seed) {
  taxonomy.validate();
  if (!taxonomy.groups) {
    throw InvalidArgument("stratified split needs a grouped taxonomy");
  }
  const auto total = taxonomy.classes.size();
  if (n_base == 0 || n_base >= total) {
    throw InvalidArgument("n_base must be in [1, " +
                          std::to_string(total - 1) + "], got " +
                          std::to_string(n_base));
  }

  const auto names = taxonomy.group_names();
  std::vector<std::vector<std::string>> members;
  std::vector<std::size_t> quota;
  std::size_t assigned = 0;
  for (const auto& g : names) {
    members.push_back(taxonomy.classes_in(g));
    quota.push_back(n_base * members.back().size() / total);
    assigned += quota.back();
  }

  SplitRng rng(seed);
  std::vector<std::size_t> visit(names.size());
  std::iota(visit.begin(), visit.end(), 0);
  rng.shuffle(visit);
  std::size_t remainder = n_base - assigned;
  for (auto g : visit) {
    if (remainder == 0) break;
    if (quota[g] < members[g].size()) {
      ++quota[g];
      --remainder;
    }
  }
  if (remainder != 0) {
    throw InvalidArgument("cannot place " + std::to_string(n_base) +
                          " base classes with per-group quotas");
  }

  std::unordered_set<std::string> base;
  for (std::size_t g = 0; g < names.size(); ++g) {
    auto order = members[g];
    rng.shuffle(order);
    base.insert(order.begin(), order.begin() + quota[g]);
  }
  return make_split(taxonomy, SplitMethod::stratified_random, seed, base);
}

SplitSpec semantic_split(const ClassTaxonomy& taxonomy,
                         std::span<const std::string> base_groups) {
  taxonomy.validate();
  if (!taxonomy.groups) {
    throw InvalidArgument("semantic split needs a grouped taxonomy");
  }
  const auto names = taxonomy.group_names();
  std::set<std::string> chosen;
  for (const auto& g : base_groups) {
    if (!std::binary_search(names.begin(), names.end(), g)) {
      throw InvalidArgument("unknown superclass '" + g + "' in '" +
                            taxonomy.dataset_id + "'");
    }
    chosen.insert(g);
  }
  if (chosen.empty() || chosen.size() == names.size()) {
    throw InvalidArgument(
        "base superclasses must be a non-empty strict subset of the " +
        std::to_string(names.size()) + " superclasses");
  }
  std::unordered_set<std::string> base;
  for (const auto& name : taxonomy.classes) {
    if (chosen.contains(taxonomy.groups->at(name))) base.insert(name);
  }
  return make_split(taxonomy, SplitMethod::semantic, std::nullopt, base);
}

// --- samples ---------------------------------------------------------------

SamplePartition partition_samples(std::span<const Sample> samples,
                                  const SplitSpec& split) {
  SamplePartition out;
  for (const auto& s : samples) {
    const bool train = s.tag == SampleTag::train;
    switch (split.side_of(s.label)) {
      case Side::base:
        (train ? out.base_train : out.base_test).push_back(s);
        break;
      case Side::novel:
        (train ? out.novel_train : out.novel_test).push_back(s);
        break;
    }
  }
  return out;
}

}  // namespace noveval
