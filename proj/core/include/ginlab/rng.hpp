#pragma once

#include <cstdint>
#include <random>

#include "ginlab/types.hpp"

namespace ginlab::rng {

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based stream derivation: one independent stream per
// (master seed, replica, purpose) triple, so replicas can run in any order
// on any number of threads.
inline std::uint64_t derive(std::uint64_t master, std::uint64_t replica,
                            std::uint64_t purpose) {
    return mix(mix(master ^ mix(replica)) ^ mix(purpose ^ 0xa5a5a5a5a5a5a5a5ull));
}

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}
    Stream(std::uint64_t master, std::uint64_t replica, std::uint64_t purpose)
        : gen_(derive(master, replica, purpose)) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }

    // complex Gaussian with E|z|^2 = var
    cdouble complex_normal(double var = 1.0) {
        double s = std::sqrt(0.5 * var);
        return {s * normal(), s * normal()};
    }

    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ginlab::rng
