#include "gridrl/policy/prompt.hpp"

namespace gridrl {

const char* task_name(Task t) {
    switch (t) {
        case Task::kCounting: return "counting";
        case Task::kPosition: return "position";
        case Task::kRegion: return "region";
        case Task::kText: return "text";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    if (name == "counting") return Task::kCounting;
    if (name == "position") return Task::kPosition;
    if (name == "region") return Task::kRegion;
    if (name == "text") return Task::kText;
    throw ArgumentError("unknown task: " + name);
}

const char* relation_name(Relation r) {
    return r == Relation::kLeftOf ? "left_of" : "above";
}

Relation relation_from_name(const std::string& name) {
    if (name == "left_of") return Relation::kLeftOf;
    if (name == "above") return Relation::kAbove;
    throw ArgumentError("unknown relation: " + name);
}

void PromptSpec::validate(const GridShape& grid, int categories) const {
    auto check_cat = [&](int c, const char* what) {
        if (c < 0 || c >= categories) {
            throw ArgumentError(std::string("prompt: ") + what + " category out of range");
        }
    };
    switch (task) {
        case Task::kCounting:
            check_cat(category_a, "counting");
            if (target_count < 0 || target_count > grid.seq_len()) {
                throw ArgumentError("prompt: target_count outside [0, T]");
            }
            break;
        case Task::kPosition:
            check_cat(category_a, "position A");
            check_cat(category_b, "position B");
            if (category_a == category_b) {
                throw ArgumentError("prompt: position categories must differ");
            }
            break;
        case Task::kRegion: {
            check_cat(category_a, "region");
            if (static_cast<int>(region_mask.size()) != grid.seq_len()) {
                throw ArgumentError("prompt: region mask must cover the grid");
            }
            bool any = false;
            for (auto m : region_mask) any = any || m != 0;
            if (!any) throw ArgumentError("prompt: empty region");
            break;
        }
        case Task::kText:
            if (text_target.empty() || static_cast<int>(text_target.size()) > grid.w) {
                throw ArgumentError("prompt: text target length outside [1, w]");
            }
            for (int c : text_target) check_cat(c, "text");
            break;
    }
}

int prompt_feature_width(const GridShape& grid, int categories) {
    return 4 + categories + categories + 1 + 2 + grid.seq_len() + grid.w * categories;
}

std::vector<double> encode_prompt(const PromptSpec& spec, const GridShape& grid, int categories) {
    spec.validate(grid, categories);
    std::vector<double> f(static_cast<std::size_t>(prompt_feature_width(grid, categories)), 0.0);
    int off = 0;
    f[static_cast<std::size_t>(off + static_cast<int>(spec.task))] = 1.0;
    off += 4;
    if (spec.task != Task::kText) {
        f[static_cast<std::size_t>(off + spec.category_a)] = 1.0;
    }
    off += categories;
    if (spec.task == Task::kPosition) {
        f[static_cast<std::size_t>(off + spec.category_b)] = 1.0;
    }
    off += categories;
    if (spec.task == Task::kCounting) {
        f[static_cast<std::size_t>(off)] = static_cast<double>(spec.target_count) / grid.seq_len();
    }
    off += 1;
    if (spec.task == Task::kPosition) {
        f[static_cast<std::size_t>(off + static_cast<int>(spec.relation))] = 1.0;
    }
    off += 2;
    if (spec.task == Task::kRegion) {
        for (int i = 0; i < grid.seq_len(); ++i) {
            f[static_cast<std::size_t>(off + i)] = spec.region_mask[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
        }
    }
    off += grid.seq_len();
    if (spec.task == Task::kText) {
        for (std::size_t i = 0; i < spec.text_target.size(); ++i) {
            f[static_cast<std::size_t>(off) + i * categories + spec.text_target[i]] = 1.0;
        }
    }
    return f;
}

}  // namespace gridrl
