// Shipped taxonomies and the fixed base/novel splits for the three
// benchmark datasets. Everything here is static data; no split is
// regenerated at runtime.

#include <algorithm>
#include <array>
#include <string_view>

#include "noveval/errors.hpp"
#include "noveval/splitgen.hpp"

namespace noveval {
namespace {

struct ClassEntry {
  std::string_view name;
  std::string_view group;
};

// CIFAR10 in label-index order.
constexpr std::array<ClassEntry, 10> kCifar10 = {{
    {"airplane", "vehicle"},
    {"automobile", "vehicle"},
    {"bird", "animal"},
    {"cat", "animal"},
    {"deer", "animal"},
    {"dog", "animal"},
    {"frog", "animal"},
    {"horse", "animal"},
    {"ship", "vehicle"},
    {"truck", "vehicle"},
}};

constexpr std::array<std::string_view, 5> kCifar10RandomBase = {
    "automobile", "bird", "deer", "frog", "ship"};
constexpr std::array<std::string_view, 5> kCifar10SemanticBase = {
    "airplane", "automobile", "bird", "ship", "truck"};

// CIFAR100 in fine-label-index order with the standard 20 coarse labels.
constexpr std::array<ClassEntry, 100> kCifar100 = {{
    {"apple", "fruit_and_vegetables"},
    {"aquarium_fish", "fish"},
    {"baby", "people"},
    {"bear", "large_carnivores"},
    {"beaver", "aquatic_mammals"},
    {"bed", "household_furniture"},
    {"bee", "insects"},
    {"beetle", "insects"},
    {"bicycle", "vehicles_1"},
    {"bottle", "food_containers"},
    {"bowl", "food_containers"},
    {"boy", "people"},
    {"bridge", "large_man-made_outdoor_things"},
    {"bus", "vehicles_1"},
    {"butterfly", "insects"},
    {"camel", "large_omnivores_and_herbivores"},
    {"can", "food_containers"},
    {"castle", "large_man-made_outdoor_things"},
    {"caterpillar", "insects"},
    {"cattle", "large_omnivores_and_herbivores"},
    {"chair", "household_furniture"},
    {"chimpanzee", "large_omnivores_and_herbivores"},
    {"clock", "household_electrical_devices"},
    {"cloud", "large_natural_outdoor_scenes"},
    {"cockroach", "insects"},
    {"couch", "household_furniture"},
    {"crab", "non-insect_invertebrates"},
    {"crocodile", "reptiles"},
    {"cup", "food_containers"},
    {"dinosaur", "reptiles"},
    {"dolphin", "aquatic_mammals"},
    {"elephant", "large_omnivores_and_herbivores"},
    {"flatfish", "fish"},
    {"forest", "large_natural_outdoor_scenes"},
    {"fox", "medium_mammals"},
    {"girl", "people"},
    {"hamster", "small_mammals"},
    {"house", "large_man-made_outdoor_things"},
    {"kangaroo", "large_omnivores_and_herbivores"},
    {"keyboard", "household_electrical_devices"},
    {"lamp", "household_electrical_devices"},
    {"lawn_mower", "vehicles_2"},
    {"leopard", "large_carnivores"},
    {"lion", "large_carnivores"},
    {"lizard", "reptiles"},
    {"lobster", "non-insect_invertebrates"},
    {"man", "people"},
    {"maple_tree", "trees"},
    {"motorcycle", "vehicles_1"},
    {"mountain", "large_natural_outdoor_scenes"},
    {"mouse", "small_mammals"},
    {"mushroom", "fruit_and_vegetables"},
    {"oak_tree", "trees"},
    {"orange", "fruit_and_vegetables"},
    {"orchid", "flowers"},
    {"otter", "aquatic_mammals"},
    {"palm_tree", "trees"},
    {"pear", "fruit_and_vegetables"},
    {"pickup_truck", "vehicles_1"},
    {"pine_tree", "trees"},
    {"plain", "large_natural_outdoor_scenes"},
    {"plate", "food_containers"},
    {"poppy", "flowers"},
    {"porcupine", "medium_mammals"},
    {"possum", "medium_mammals"},
    {"rabbit", "small_mammals"},
    {"raccoon", "medium_mammals"},
    {"ray", "fish"},
    {"road", "large_man-made_outdoor_things"},
    {"rocket", "vehicles_2"},
    {"rose", "flowers"},
    {"sea", "large_natural_outdoor_scenes"},
    {"seal", "aquatic_mammals"},
    {"shark", "fish"},
    {"shrew", "small_mammals"},
    {"skunk", "medium_mammals"},
    {"skyscraper", "large_man-made_outdoor_things"},
    {"snail", "non-insect_invertebrates"},
    {"snake", "reptiles"},
    {"spider", "non-insect_invertebrates"},
    {"squirrel", "small_mammals"},
    {"streetcar", "vehicles_2"},
    {"sunflower", "flowers"},
    {"sweet_pepper", "fruit_and_vegetables"},
    {"table", "household_furniture"},
    {"tank", "vehicles_2"},
    {"telephone", "household_electrical_devices"},
    {"television", "household_electrical_devices"},
    {"tiger", "large_carnivores"},
    {"tractor", "vehicles_2"},
    {"train", "vehicles_1"},
    {"trout", "fish"},
    {"tulip", "flowers"},
    {"turtle", "reptiles"},
    {"wardrobe", "household_furniture"},
    {"whale", "aquatic_mammals"},
    {"willow_tree", "trees"},
    {"wolf", "large_carnivores"},
    {"woman", "people"},
    {"worm", "non-insect_invertebrates"},
}};

// FC100 training superclasses; its validation and test superclasses
// (aquatic mammals, insects, large carnivores, large omnivores and
// herbivores, medium mammals, non-insect invertebrates, people, small
// mammals) form the novel side.
constexpr std::array<std::string_view, 12> kCifar100SemanticBaseGroups = {
    "fish",
    "flowers",
    "food_containers",
    "fruit_and_vegetables",
    "household_electrical_devices",
    "household_furniture",
    "large_man-made_outdoor_things",
    "large_natural_outdoor_scenes",
    "reptiles",
    "trees",
    "vehicles_1",
    "vehicles_2",
};

// Drawn once with random_split(cifar100, 50, seed 14), the first seed that
// puts baby, girl and man on the base side and boy, woman on the novel side.
constexpr std::array<std::string_view, 50> kCifar100RandomBase = {
    "apple",
    "baby",
    "bear",
    "beaver",
    "bee",
    "beetle",
    "bottle",
    "bowl",
    "bridge",
    "can",
    "caterpillar",
    "chair",
    "chimpanzee",
    "cloud",
    "cockroach",
    "couch",
    "crocodile",
    "dinosaur",
    "dolphin",
    "flatfish",
    "fox",
    "girl",
    "hamster",
    "kangaroo",
    "keyboard",
    "lion",
    "lizard",
    "lobster",
    "man",
    "mountain",
    "mushroom",
    "oak_tree",
    "orange",
    "palm_tree",
    "pear",
    "pickup_truck",
    "pine_tree",
    "plain",
    "plate",
    "possum",
    "raccoon",
    "rocket",
    "rose",
    "sea",
    "seal",
    "shark",
    "skyscraper",
    "snail",
    "willow_tree",
    "worm",
};

// Sixteen high-level categories, 6-7 ImageNet classes each: eight artefact
// categories followed by eight animal categories.
constexpr std::array<ClassEntry, 100> kImagenet100 = {{
    {"ambulance", "motor_vehicle"},
    {"beach_wagon", "motor_vehicle"},
    {"cab", "motor_vehicle"},
    {"convertible", "motor_vehicle"},
    {"jeep", "motor_vehicle"},
    {"limousine", "motor_vehicle"},
    {"minivan", "motor_vehicle"},
    {"airliner", "craft"},
    {"airship", "craft"},
    {"canoe", "craft"},
    {"catamaran", "craft"},
    {"fireboat", "craft"},
    {"gondola", "craft"},
    {"speedboat", "craft"},
    {"dishwasher", "durables"},
    {"iron", "durables"},
    {"microwave", "durables"},
    {"refrigerator", "durables"},
    {"toaster", "durables"},
    {"washer", "durables"},
    {"cardigan", "garment"},
    {"jean", "garment"},
    {"kimono", "garment"},
    {"miniskirt", "garment"},
    {"poncho", "garment"},
    {"trench_coat", "garment"},
    {"accordion", "musical_instrument"},
    {"banjo", "musical_instrument"},
    {"cello", "musical_instrument"},
    {"french_horn", "musical_instrument"},
    {"grand_piano", "musical_instrument"},
    {"harmonica", "musical_instrument"},
    {"croquet_ball", "game_equipment"},
    {"golf_ball", "game_equipment"},
    {"pool_table", "game_equipment"},
    {"puck", "game_equipment"},
    {"rugby_ball", "game_equipment"},
    {"tennis_ball", "game_equipment"},
    {"bookcase", "furnishing"},
    {"china_cabinet", "furnishing"},
    {"four-poster", "furnishing"},
    {"rocking_chair", "furnishing"},
    {"studio_couch", "furnishing"},
    {"wardrobe", "furnishing"},
    {"hammer", "tool"},
    {"hatchet", "tool"},
    {"plane", "tool"},
    {"power_drill", "tool"},
    {"screwdriver", "tool"},
    {"shovel", "tool"},
    {"bighorn", "ungulate"},
    {"gazelle", "ungulate"},
    {"hartebeest", "ungulate"},
    {"ibex", "ungulate"},
    {"impala", "ungulate"},
    {"ox", "ungulate"},
    {"zebra", "ungulate"},
    {"baboon", "primate"},
    {"capuchin", "primate"},
    {"chimpanzee", "primate"},
    {"gorilla", "primate"},
    {"orangutan", "primate"},
    {"siamang", "primate"},
    {"spider_monkey", "primate"},
    {"cheetah", "feline"},
    {"jaguar", "feline"},
    {"leopard", "feline"},
    {"lion", "feline"},
    {"lynx", "feline"},
    {"tiger", "feline"},
    {"boxer", "working_dog"},
    {"collie", "working_dog"},
    {"doberman", "working_dog"},
    {"german_shepherd", "working_dog"},
    {"great_dane", "working_dog"},
    {"siberian_husky", "working_dog"},
    {"african_chameleon", "saurian"},
    {"agama", "saurian"},
    {"alligator_lizard", "saurian"},
    {"frilled_lizard", "saurian"},
    {"green_lizard", "saurian"},
    {"komodo_dragon", "saurian"},
    {"albatross", "aquatic_bird"},
    {"black_swan", "aquatic_bird"},
    {"flamingo", "aquatic_bird"},
    {"goose", "aquatic_bird"},
    {"king_penguin", "aquatic_bird"},
    {"pelican", "aquatic_bird"},
    {"ant", "insect"},
    {"bee", "insect"},
    {"dragonfly", "insect"},
    {"ladybug", "insect"},
    {"monarch", "insect"},
    {"walking_stick", "insect"},
    {"goldfish", "aquatic_vertebrate"},
    {"great_white_shark", "aquatic_vertebrate"},
    {"hammerhead", "aquatic_vertebrate"},
    {"lionfish", "aquatic_vertebrate"},
    {"puffer", "aquatic_vertebrate"},
    {"stingray", "aquatic_vertebrate"},
}};

constexpr std::array<std::string_view, 8> kImagenet100ArtefactGroups = {
    "craft",    "durables",     "furnishing", "game_equipment",
    "garment",  "motor_vehicle", "musical_instrument", "tool"};

// Drawn once with stratified_random_split(imagenet100, 50, seed 0).
constexpr std::array<std::string_view, 50> kImagenet100RandomBase = {
    "agama",
    "airliner",
    "airship",
    "albatross",
    "alligator_lizard",
    "banjo",
    "beach_wagon",
    "bee",
    "bookcase",
    "boxer",
    "capuchin",
    "cardigan",
    "cello",
    "cheetah",
    "dishwasher",
    "dragonfly",
    "four-poster",
    "french_horn",
    "german_shepherd",
    "goldfish",
    "gondola",
    "goose",
    "great_dane",
    "great_white_shark",
    "green_lizard",
    "ibex",
    "impala",
    "jean",
    "jeep",
    "king_penguin",
    "leopard",
    "lion",
    "microwave",
    "miniskirt",
    "minivan",
    "monarch",
    "orangutan",
    "ox",
    "poncho",
    "pool_table",
    "power_drill",
    "puffer",
    "rugby_ball",
    "screwdriver",
    "shovel",
    "spider_monkey",
    "tennis_ball",
    "toaster",
    "walking_stick",
    "wardrobe",
};

template <std::size_t N>
ClassTaxonomy make_taxonomy(std::string_view id,
                            const std::array<ClassEntry, N>& entries) {
  ClassTaxonomy t;
  t.dataset_id = std::string(id);
  t.groups.emplace();
  for (const auto& e : entries) {
    t.classes.emplace_back(e.name);
    t.groups->emplace(std::string(e.name), std::string(e.group));
  }
  return t;
}

template <std::size_t N>
SplitSpec fixed_split(const ClassTaxonomy& taxonomy, BuiltinKind kind,
                      const std::array<std::string_view, N>& base_names) {
  SplitSpec split;
  split.dataset_id = taxonomy.dataset_id;
  split.method = SplitMethod::builtin;
  split.kind = kind;
  for (const auto& name : taxonomy.classes) {
    const bool is_base = std::find(base_names.begin(), base_names.end(),
                                   name) != base_names.end();
    (is_base ? split.base : split.novel).push_back(name);
  }
  std::sort(split.base.begin(), split.base.end());
  std::sort(split.novel.begin(), split.novel.end());
  return split;
}

template <std::size_t N>
SplitSpec group_split(const ClassTaxonomy& taxonomy,
                      const std::array<std::string_view, N>& groups) {
  std::vector<std::string> names(groups.begin(), groups.end());
  auto split = semantic_split(taxonomy, names);
  split.method = SplitMethod::builtin;
  split.kind = BuiltinKind::semantic;
  return split;
}

}  // namespace

std::vector<std::string> builtin_dataset_ids() {
  return {"cifar10", "cifar100", "imagenet100"};
}

ClassTaxonomy builtin_taxonomy(std::string_view dataset_id) {
  if (dataset_id == "cifar10") return make_taxonomy(dataset_id, kCifar10);
  if (dataset_id == "cifar100") return make_taxonomy(dataset_id, kCifar100);
  if (dataset_id == "imagenet100") {
    return make_taxonomy(dataset_id, kImagenet100);
  }
  throw NotFound("no builtin taxonomy for dataset '" +
                 std::string(dataset_id) +
                 "' (known: cifar10, cifar100, imagenet100)");
}

SplitSpec builtin_split(std::string_view dataset_id, BuiltinKind kind) {
  if (dataset_id != "cifar10" && dataset_id != "cifar100" &&
      dataset_id != "imagenet100") {
    throw NotFound("no builtin split for dataset '" +
                   std::string(dataset_id) +
                   "' (known: cifar10, cifar100, imagenet100)");
  }
  const auto taxonomy = builtin_taxonomy(dataset_id);
  if (dataset_id == "cifar10") {
    return kind == BuiltinKind::random
               ? fixed_split(taxonomy, kind, kCifar10RandomBase)
               : fixed_split(taxonomy, kind, kCifar10SemanticBase);
  }
  if (dataset_id == "cifar100") {
    return kind == BuiltinKind::random
               ? fixed_split(taxonomy, kind, kCifar100RandomBase)
               : group_split(taxonomy, kCifar100SemanticBaseGroups);
  }
  return kind == BuiltinKind::random
             ? fixed_split(taxonomy, kind, kImagenet100RandomBase)
             : group_split(taxonomy, kImagenet100ArtefactGroups);
}

}  // namespace noveval
