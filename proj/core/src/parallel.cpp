#include "qpc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qpc {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("QPC_THREADS"); env != nullptr && *env != '\0') {
        try {
            const unsigned long v = std::stoul(env);
            if (v > 0) {
                return v;
            }
        } catch (const std::exception&) {
            // fall through to hardware concurrency
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace qpc
