#include "thfield/rng.hpp"

#include <cmath>

namespace thfield::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t x[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t y0 = hi1 ^ x[1] ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x[3] ^ k1;
    const std::uint32_t y3 = lo0;
    x[0] = y0;
    x[1] = y1;
    x[2] = y2;
    x[3] = y3;
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    // 53 bits: hi contributes 32, lo the remaining 21
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) | (lo >> 11);
    return bits * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

Block philox(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint32_t x[4] = {
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(x, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Block{{x[0], x[1], x[2], x[3]}};
}

double uniform_at(const SeedSpec& s, std::uint64_t index) {
    const Block b = philox(s.seed, s.stream, index >> 1);
    return (index & 1) ? to_unit(b.w[2], b.w[3]) : to_unit(b.w[0], b.w[1]);
}

double normal_at(const SeedSpec& s, std::uint64_t index) {
    const Block b = philox(s.seed, s.stream, index >> 1);
    const double u1 = to_unit(b.w[0], b.w[1]);
    const double u2 = to_unit(b.w[2], b.w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846264338327950 * u2;
    return (index & 1) ? r * std::sin(phi) : r * std::cos(phi);
}

void fill_normals(const SeedSpec& s, std::uint64_t start_index, std::span<double> out) {
    std::uint64_t i = start_index;
    std::size_t n = 0;
    // align to a block boundary, then take both normals per block
    while (n < out.size() && (i & 1)) out[n++] = normal_at(s, i++);
    while (n + 2 <= out.size()) {
        const Block b = philox(s.seed, s.stream, i >> 1);
        const double u1 = to_unit(b.w[0], b.w[1]);
        const double u2 = to_unit(b.w[2], b.w[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846264338327950 * u2;
        out[n++] = r * std::cos(phi);
        out[n++] = r * std::sin(phi);
        i += 2;
    }
    while (n < out.size()) out[n++] = normal_at(s, i++);
}

}  // namespace thfield::rng

namespace thfield {

NoiseGrid make_noise_grid(const Grid2D& grid, const SeedSpec& seed) {
    grid.validate();
    NoiseGrid ng;
    ng.grid = grid;
    ng.values.resize(grid.size());
    rng::fill_normals(seed, 0, ng.values);
    const double scale = std::sqrt(grid.cell_area());
    for (double& v : ng.values) v *= scale;
    return ng;
}

}
