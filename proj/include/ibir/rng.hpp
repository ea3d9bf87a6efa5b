#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ibir {

/// Deterministic random source. Wraps mt19937_64 but draws bounded integers
/// via rejection sampling, so sequences are identical across standard-library
/// implementations (std::uniform_int_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Derives an independent sub-seed for a named purpose ("baseline", "suites/F1",
/// ...). Adding a new consumer never perturbs existing streams.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose);

}  // namespace ibir
