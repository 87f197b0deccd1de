#include <iga/parallel.hpp>

#include <cstdlib>
#include <string>

namespace iga {

auto max_threads() -> int {
    static const int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1)
            hw = 1;
        if (const char* env = std::getenv("IGA_THREADS")) {
            try {
                const int requested = std::stoi(env);
                if (requested >= 1)
                    return requested < hw ? requested : hw;
            } catch (...) {
                // Unparseable value: fall through to the hardware default.
            }
        }
        return hw;
    }();
    return cached;
}

}  // namespace iga
