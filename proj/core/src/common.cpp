#include <cpd/common.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace cpd {

void require_series(SeriesView x, std::size_t min_length) {
    if (x.size() < min_length) {
        throw InvalidLength("series length " + std::to_string(x.size()) +
                            " is below the minimum " + std::to_string(min_length));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw ParameterError("series entry " + std::to_string(i + 1) + " is not finite");
        }
    }
}

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    require_series(values_);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {
std::atomic<std::size_t> g_max_threads{0};
}

void set_max_threads(std::size_t threads) {
    g_max_threads.store(threads);
}

std::size_t max_threads() noexcept {
    std::size_t cap = g_max_threads.load();
    if (cap == 0) {
        cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    // Nested calls run inline on the calling worker.
    thread_local bool inside = false;
    std::size_t workers = inside ? 1 : std::min(max_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        inside = true;
        struct Reset {
            ~Reset() { inside = false; }
        } reset;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& thread : pool) {
        thread.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace cpd
