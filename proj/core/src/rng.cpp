#include "iadmm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace iadmm {

double SeededRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t SeededRng::bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("SeededRng::bounded: n must be >= 1");
    const std::uint64_t threshold = (-n) % n;
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= threshold) return x % n;
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> labels) {
    std::uint64_t state = 0x243F6A8885A308D3ULL;
    std::uint64_t out = splitmix64(state);
    for (std::uint64_t label : labels) {
        state ^= label;
        out = splitmix64(state);
    }
    return out;
}

Matrix randn_matrix(SeededRng& rng, Index rows, Index cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("randn_matrix: rows and cols must be >= 1");
    }
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            out(i, j) = rng.normal();
        }
    }
    return out;
}

Matrix sparse_uniform_matrix(SeededRng& rng, Index rows, Index cols,
                             Index nnz, double lo, double hi) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("sparse_uniform_matrix: rows and cols must be >= 1");
    }
    const Index total = rows * cols;
    if (nnz < 0 || nnz > total) {
        throw std::invalid_argument("sparse_uniform_matrix: nnz out of [0, rows*cols]");
    }
    if (!(lo < hi)) {
        throw std::invalid_argument("sparse_uniform_matrix: need lo < hi");
    }

    std::vector<Index> indices(static_cast<std::size_t>(total));
    for (Index i = 0; i < total; ++i) indices[static_cast<std::size_t>(i)] = i;

    Matrix out = Matrix::Zero(rows, cols);
    for (Index i = 0; i < nnz; ++i) {
        const Index j = i + static_cast<Index>(
            rng.bounded(static_cast<std::uint64_t>(total - i)));
        std::swap(indices[static_cast<std::size_t>(i)],
                  indices[static_cast<std::size_t>(j)]);
        const Index linear = indices[static_cast<std::size_t>(i)];
        double value = rng.uniform(lo, hi);
        while (value == 0.0) value = rng.uniform(lo, hi);  // keep the support exact
        out(linear / cols, linear % cols) = value;
    }
    return out;
}

}  // namespace iadmm
