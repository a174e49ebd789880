#pragma once

#include <cstdint>
#include <span>

#include "thfield/grid.hpp"

namespace thfield {

/// Reproducibility key: identical (seed, stream) gives bit-identical output
/// on the same build, independent of evaluation order or thread count.
struct SeedSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace rng {

/// Philox-4x32-10 block at a 128-bit counter split as (index, stream),
/// keyed by the seed. Returns four independent 32-bit words.
struct Block {
    std::uint32_t w[4];
};
Block philox(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// index-addressable standard normals (Box-Muller over philox uniforms);
/// two normals per block, selected by index parity.
double normal_at(const SeedSpec& s, std::uint64_t index);

/// uniform in (0,1)
double uniform_at(const SeedSpec& s, std::uint64_t index);

void fill_normals(const SeedSpec& s, std::uint64_t start_index, std::span<double> out);

}  // namespace rng

/// Brownian-field increments on a cell grid: values[c] ~ N(0, dx*dy)
/// i.i.d., cell c covering [x0+i*dx, x0+(i+1)*dx) x [y0+j*dy, y0+(j+1)*dy).
struct NoiseGrid {
    Grid2D grid;
    std::vector<double> values;
};

NoiseGrid make_noise_grid(const Grid2D& grid, const SeedSpec& seed);

}
