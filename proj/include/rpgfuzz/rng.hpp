#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rpgfuzz {

// Seeded RNG with hand-rolled draws so output streams are identical across
// standard library implementations. std::uniform_int_distribution is
// implementation-defined and would break replayable runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [lo, hi], inclusive. Modulo bias is irrelevant at the
    // range sizes used here.
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    double unit() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool chance(double p) { return unit() < p; }

    bool coin() { return (engine_() & 1) != 0; }

    std::string alnum_string(std::size_t min_len, std::size_t max_len) {
        static constexpr char kAlphabet[] =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
        const auto len = static_cast<std::size_t>(
            int_in(static_cast<std::int64_t>(min_len), static_cast<std::int64_t>(max_len)));
        std::string out;
        out.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
            out.push_back(kAlphabet[engine_() % (sizeof(kAlphabet) - 1)]);
        }
        return out;
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[engine_() % items.size()];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[engine_() % i]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rpgfuzz
