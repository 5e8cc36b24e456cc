#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ratekit {

// SplitMix64. All seed-derived behaviour (blinding permutations, per-coder
// presentation order) goes through this generator because std::shuffle and
// the std distributions are not bit-stable across standard library
// implementations, and runs must be byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

// Fixed-decimal formatting for table emission. "-0.00" is normalised to
// "0.00" so grids stay byte-stable regardless of rounding direction.
std::string format_fixed(double value, int decimals);

// Signed rendering for directional values and diffs: "+1", "0", "-2".
std::string format_signed(long long value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::string trim(std::string_view s);

} // namespace ratekit
