#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridrl/codebook/codebook.hpp"

namespace gridrl {

enum class Task { kCounting, kPosition, kRegion, kText };
enum class Relation { kLeftOf, kAbove };

const char* task_name(Task t);
Task task_from_name(const std::string& name);
const char* relation_name(Relation r);
Relation relation_from_name(const std::string& name);

// One structured generation task: what the grid should contain.
struct PromptSpec {
    Task task = Task::kCounting;
    int category_a = 0;                    // counting/region target, position A
    int category_b = -1;                   // position B
    int target_count = 0;                  // counting
    Relation relation = Relation::kLeftOf;  // position
    std::vector<std::uint8_t> region_mask;  // h*w cells, region task
    std::vector<int> text_target;           // category ids, length <= w

    bool operator==(const PromptSpec&) const = default;

    // Targets must fit the grid and the category alphabet.
    void validate(const GridShape& grid, int categories) const;
};

// Fixed-width conditioning features: task one-hot | category A one-hot |
// category B one-hot | normalized count | relation one-hot | region mask |
// per-column text one-hots. Width depends only on (grid, categories).
int prompt_feature_width(const GridShape& grid, int categories);
std::vector<double> encode_prompt(const PromptSpec& spec, const GridShape& grid, int categories);

}  // namespace gridrl
