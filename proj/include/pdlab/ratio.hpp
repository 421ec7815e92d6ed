#pragma once

#include <cstdint>

namespace pdlab {

/// output / (input * scale). Compressor outputs are counted in symbols of the
/// input alphabet (scale 1); LZ outputs are counted in bits (scale log2|Sigma|).
struct Ratio {
    std::uint64_t output = 0;
    std::uint64_t input = 0;
    double scale = 1.0;

    double value() const { return static_cast<double>(output) / (static_cast<double>(input) * scale); }
};

}  // namespace pdlab
