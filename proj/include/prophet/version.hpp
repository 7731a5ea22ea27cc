#pragma once

#include <cstdint>

namespace prophet {

inline constexpr const char* kVersion = "0.1.0";

// Seed used when the caller does not supply one, so bare invocations are
// reproducible. Override with --seed on the command line.
inline constexpr std::uint64_t kDefaultSeed = 271828;

}  // namespace prophet
