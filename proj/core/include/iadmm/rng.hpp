#ifndef IADMM_RNG_HPP_
#define IADMM_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "iadmm/linalg.hpp"

namespace iadmm {

/// Deterministic random source: identical seeds produce identical streams
/// across runs and platforms. The engine is std::mt19937_64 (bit-exact by
/// the standard); all real-valued draws are derived from its raw 64-bit
/// output rather than the implementation-defined std::*_distribution
/// adapters.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box-Muller; the second value of each pair is
    /// cached so consecutive draws consume engine output in a fixed order.
    double normal();

    /// Uniform integer on [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::uint64_t bounded(std::uint64_t n);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stable combination of labels into a derived seed (splitmix64 chain).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> labels);

/// rows x cols matrix of i.i.d. standard normals, filled row by row.
Matrix randn_matrix(SeededRng& rng, Index rows, Index cols);

/// Matrix with exactly nnz nonzero entries. The support is drawn uniformly
/// without replacement (partial Fisher-Yates over linear indices, row-major);
/// values are i.i.d. uniform on [lo, hi].
Matrix sparse_uniform_matrix(SeededRng& rng, Index rows, Index cols,
                             Index nnz, double lo, double hi);

}  // namespace iadmm

#endif  // IADMM_RNG_HPP_
