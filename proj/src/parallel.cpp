#include "riskgene/parallel.hpp"

#include <cstdlib>

#include "riskgene/config.hpp"
#include "riskgene/errors.hpp"

namespace riskgene {

unsigned configured_threads() {
    const char* env = std::getenv("RISKGENE_THREADS");
    std::uint64_t requested = 0;
    if (env != nullptr && *env != '\0') {
        requested = parse_u64(env, "RISKGENE_THREADS");
    }
    if (requested == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
    return static_cast<unsigned>(std::min<std::uint64_t>(requested, 4096));
}

}  // namespace riskgene
