#include "speedlab/rng.hpp"

#include <cerrno>
#include <cstdlib>

namespace speedlab {

std::uint64_t default_seed() {
    const char* env = std::getenv(kSeedEnvVar);
    if (!env || !*env) return kFallbackSeed;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (errno != 0 || *end != '\0') return kFallbackSeed;
    return static_cast<std::uint64_t>(v);
}

}  // namespace speedlab
