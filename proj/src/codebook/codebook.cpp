#include "gridrl/codebook/codebook.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gridrl/numerics/rng.hpp"

namespace gridrl {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void normalize(std::span<double> v) {
    double n = std::sqrt(dot(v, v));
    if (!(n > 0.0)) throw NumericalError("codebook: zero-norm embedding");
    for (double& x : v) x /= n;
}

}  // namespace

Codebook Codebook::build(int vocab, int dim, int categories, double intra_noise,
                         std::uint64_t seed) {
    if (categories <= 0 || vocab % categories != 0) {
        throw ArgumentError("codebook: K must divide V");
    }
    if (dim < categories) throw ArgumentError("codebook: C must be >= K");
    if (!(intra_noise >= 0.0 && intra_noise <= 0.5)) {
        throw ArgumentError("codebook: intra_noise outside [0, 0.5]");
    }

    Rng rng(seed);
    // Gram-Schmidt on seeded gaussians gives K orthonormal category centers.
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(categories));
    for (auto& c : centers) {
        c.resize(static_cast<std::size_t>(dim));
        for (double& x : c) x = rng.gaussian();
    }
    for (int k = 0; k < categories; ++k) {
        auto& c = centers[static_cast<std::size_t>(k)];
        for (int j = 0; j < k; ++j) {
            const auto& prev = centers[static_cast<std::size_t>(j)];
            double proj = dot(c, prev);
            for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] -= proj * prev[static_cast<std::size_t>(i)];
        }
        normalize(c);
    }

    Codebook cb;
    cb.vocab_ = vocab;
    cb.dim_ = dim;
    cb.categories_ = categories;
    cb.embeddings_.resize(static_cast<std::size_t>(vocab) * dim);
    int per_cat = vocab / categories;
    for (int t = 0; t < vocab; ++t) {
        const auto& center = centers[static_cast<std::size_t>(t / per_cat)];
        std::span<double> e(cb.embeddings_.data() + static_cast<std::size_t>(t) * dim,
                            static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            e[i] = center[static_cast<std::size_t>(i)] + intra_noise * rng.gaussian();
        }
        normalize(e);
    }

    // Construction guarantee: same-category tokens sit closer than
    // cross-category ones. Checked on all pairs.
    double intra_sum = 0.0, inter_sum = 0.0;
    long long intra_n = 0, inter_n = 0;
    for (int a = 0; a < vocab; ++a) {
        for (int b = a + 1; b < vocab; ++b) {
            double c = dot(cb.embedding(a), cb.embedding(b));
            if (cb.category_of(a) == cb.category_of(b)) {
                intra_sum += c;
                ++intra_n;
            } else {
                inter_sum += c;
                ++inter_n;
            }
        }
    }
    cb.mean_intra_cosine_ = intra_n > 0 ? intra_sum / intra_n : 1.0;
    cb.mean_inter_cosine_ = inter_n > 0 ? inter_sum / inter_n : 0.0;
    if (intra_n > 0 && inter_n > 0 && !(cb.mean_intra_cosine_ > cb.mean_inter_cosine_)) {
        throw NumericalError("codebook: intra-category cosine does not exceed inter-category");
    }
    return cb;
}

std::span<const double> Codebook::embedding(int token) const {
    if (token < 0 || token >= vocab_) throw ArgumentError("codebook: token id out of range");
    return {embeddings_.data() + static_cast<std::size_t>(token) * dim_,
            static_cast<std::size_t>(dim_)};
}

int Codebook::category_of(int token) const {
    if (token < 0 || token >= vocab_) throw ArgumentError("codebook: token id out of range");
    return token / tokens_per_category();
}

int Codebook::token_of_category(int category) const {
    if (category < 0 || category >= categories_) {
        throw ArgumentError("codebook: category out of range");
    }
    return category * tokens_per_category();
}

std::vector<std::vector<double>> Codebook::embed(std::span<const int> tokens) const {
    std::vector<std::vector<double>> out;
    out.reserve(tokens.size());
    for (int t : tokens) {
        auto e = embedding(t);
        out.emplace_back(e.begin(), e.end());
    }
    return out;
}

std::array<std::uint8_t, 3> Codebook::category_color(int category) const {
    if (category < 0 || category >= categories_) {
        throw ArgumentError("codebook: category out of range");
    }
    double hue = 6.0 * category / categories_;  // [0, 6)
    int sector = static_cast<int>(hue);
    double f = hue - sector;
    auto u8 = [](double v) { return static_cast<std::uint8_t>(v * 255.0 + 0.5); };
    double q = 1.0 - f;
    switch (sector % 6) {
        case 0: return {u8(1.0), u8(f), u8(0.0)};
        case 1: return {u8(q), u8(1.0), u8(0.0)};
        case 2: return {u8(0.0), u8(1.0), u8(f)};
        case 3: return {u8(0.0), u8(q), u8(1.0)};
        case 4: return {u8(f), u8(0.0), u8(1.0)};
        default: return {u8(1.0), u8(0.0), u8(q)};
    }
}

void Codebook::render_grid(std::span<const int> tokens, const GridShape& shape,
                           const std::filesystem::path& path) const {
    if (static_cast<int>(tokens.size()) != shape.seq_len()) {
        throw ArgumentError("render_grid: token count does not match grid");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("render_grid: cannot open " + path.string());
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", shape.w, shape.h);
    out.write(header, n);
    for (int t : tokens) {
        auto rgb = category_color(category_of(t));
        out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
    if (!out) throw IoError("render_grid: write failed for " + path.string());
}

}  // namespace gridrl
