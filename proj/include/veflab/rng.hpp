#pragma once

#include <cstdint>

namespace veflab {

/// Counter-based generator: output i is splitmix64(seed, i). Stateless apart
/// from the counter, so streams are reproducible across platforms and safe to
/// evaluate in parallel. The generator name and seed go in run manifests.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static constexpr const char* kName = "splitmix64";

    std::uint64_t next_u64() { return at(counter_++); }
    /// Uniform in [0,1).
    double next_uniform();
    /// Standard normal via Box-Muller on two uniforms.
    double next_normal();

    std::uint64_t at(std::uint64_t counter) const;
    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace veflab
