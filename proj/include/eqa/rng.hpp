#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace eqa {

// Deterministic RNG wrapper. std::uniform_int_distribution is not portable
// across standard libraries, so bounded draws are derived from the raw
// mt19937_64 stream directly.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Inclusive range.
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + int(next_u64() % uint64_t(hi - lo + 1));
    }

    double uniform01() { return (next_u64() >> 11) * (1.0 / 9007199254740992.0); }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[size_t(uniform_int(0, int(v.size()) - 1))];
    }

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(uniform_int(0, int(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace eqa
