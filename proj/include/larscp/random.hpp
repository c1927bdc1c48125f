#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace larscp {

// Seeded source of uniforms and standard normals. The bit pattern of every
// draw is fixed by the seed: mt19937_64 words, 53-bit uniforms, and the
// Marsaglia polar method for normals.
class RandomStream {
public:
    static constexpr std::string_view algorithm = "mt19937_64+marsaglia-polar";

    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace larscp
