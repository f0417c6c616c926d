#include "harness/parallel.hpp"

#include <cstdlib>
#include <string>

namespace harness {

int default_thread_count() {
    if (const char* env = std::getenv("HARNESS_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace harness
