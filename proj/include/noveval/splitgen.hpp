#pragma once

// Class-disjoint partitions of a label space.
//
// A taxonomy lists the classes of a dataset and, optionally, groups them
// into superclasses. A split assigns every class to exactly one of two
// sides: base classes, whose labels may be used for training, and novel
// classes, which stay unseen. partition_samples() then crosses the class
// axis with the train/test axis to produce the four sample quadrants.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noveval/types.hpp"

namespace noveval {

struct ClassTaxonomy {
  std::string dataset_id;
  std::vector<std::string> classes;  // declared order matters for seeding
  // class -> superclass; total over `classes` when present
  std::optional<std::map<std::string, std::string>> groups;

  // Throws InvalidArgument when a structural invariant is broken.
  void validate() const;

  // Sorted, unique superclass names. Empty when ungrouped.
  std::vector<std::string> group_names() const;

  // Classes of one superclass, in declared order.
  std::vector<std::string> classes_in(std::string_view group) const;
};

enum class SplitMethod : std::uint8_t {
  random,
  stratified_random,
  semantic,
  builtin
};

enum class BuiltinKind : std::uint8_t { random, semantic };

std::string_view to_string(SplitMethod method) noexcept;
std::string_view to_string(BuiltinKind kind) noexcept;
SplitMethod parse_split_method(std::string_view text);
BuiltinKind parse_builtin_kind(std::string_view text);

struct SplitSpec {
  std::string dataset_id;
  SplitMethod method = SplitMethod::random;
  std::optional<std::uint64_t> seed;  // only for the seeded methods
  std::optional<BuiltinKind> kind;    // only for method == builtin
  std::vector<std::string> base;      // sorted
  std::vector<std::string> novel;     // sorted

  // Side of a class; throws UnknownLabel if the class is on neither side.
  Side side_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  // Short column label for reports, e.g. "random", "semantic",
  // "random-s7".
  std::string descriptor() const;

  // Disjointness and non-emptiness. With a taxonomy, also exhaustiveness
  // and (for semantic splits over a grouped taxonomy) superclass purity.
  void validate() const;
  void validate(const ClassTaxonomy& taxonomy) const;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

SplitSpec random_split(const ClassTaxonomy& taxonomy, std::size_t n_base,
                       std::uint64_t seed);

// Per-group quotas of floor(n_base * m_g / M); leftover slots go to groups
// visited in a seeded random order, one extra class each.
SplitSpec stratified_random_split(const ClassTaxonomy& taxonomy,
                                  std::size_t n_base, std::uint64_t seed);

SplitSpec semantic_split(const ClassTaxonomy& taxonomy,
                         std::span<const std::string> base_groups);

// The fixed splits shipped for cifar10, cifar100 and imagenet100.
SplitSpec builtin_split(std::string_view dataset_id, BuiltinKind kind);
ClassTaxonomy builtin_taxonomy(std::string_view dataset_id);
std::vector<std::string> builtin_dataset_ids();

struct Sample {
  std::string id;
  std::string label;
  SampleTag tag = SampleTag::test;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct SamplePartition {
  std::vector<Sample> base_train;   // labeled training pool
  std::vector<Sample> novel_train;  // unlabeled training pool
  std::vector<Sample> base_test;
  std::vector<Sample> novel_test;

  std::size_t size() const noexcept {
    return base_train.size() + novel_train.size() + base_test.size() +
           novel_test.size();
  }
};

// Routes each sample by (side of its label, tag), preserving input order
// within each quadrant.
SamplePartition partition_samples(std::span<const Sample> samples,
                                  const SplitSpec& split);

}  // namespace noveval
