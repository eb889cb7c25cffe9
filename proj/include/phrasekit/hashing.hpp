#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace phrasekit {

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string to_hex(std::uint64_t v);

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: the i-th draw is a pure function of (key, i),
// so streams are reproducible on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }
    // Uniform in (0, 1).
    double next_open_unit();
    // Standard normal via Box-Muller.
    double next_normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace phrasekit
