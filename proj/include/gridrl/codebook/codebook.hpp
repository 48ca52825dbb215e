#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gridrl/errors.hpp"

namespace gridrl {

struct GridShape {
    int h = 8;
    int w = 8;
    int seq_len() const { return h * w; }
};

// Synthetic VQ codebook: V unit-norm embeddings in R^C grouped into K
// semantic categories around orthonormal centers, so tokens with the same
// visual meaning have high cosine similarity even when their indices differ.
class Codebook {
public:
    // K must divide V, C >= K, intra_noise in [0, 0.5]. Deterministic per
    // seed; construction verifies mean intra-category cosine exceeds mean
    // inter-category cosine and hard-errors otherwise.
    static Codebook build(int vocab, int dim, int categories, double intra_noise,
                          std::uint64_t seed);

    int vocab() const { return vocab_; }
    int dim() const { return dim_; }
    int categories() const { return categories_; }
    int tokens_per_category() const { return vocab_ / categories_; }

    std::span<const double> embedding(int token) const;
    int category_of(int token) const;
    // Any token id of the given category (the first one).
    int token_of_category(int category) const;

    // Position-wise embedding lookup; length preserved.
    std::vector<std::vector<double>> embed(std::span<const int> tokens) const;

    double mean_intra_cosine() const { return mean_intra_cosine_; }
    double mean_inter_cosine() const { return mean_inter_cosine_; }

    // Fixed per-category color, hue at category/K on the HSV wheel.
    std::array<std::uint8_t, 3> category_color(int category) const;

    // Binary P6 image, one pixel per grid cell, colored by token category.
    void render_grid(std::span<const int> tokens, const GridShape& shape,
                     const std::filesystem::path& path) const;

private:
    int vocab_ = 0;
    int dim_ = 0;
    int categories_ = 0;
    std::vector<double> embeddings_;  // vocab x dim row-major
    double mean_intra_cosine_ = 0.0;
    double mean_inter_cosine_ = 0.0;
};

}  // namespace gridrl
