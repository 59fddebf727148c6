#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>

namespace vanspec {

/// Selects the OpenMP kernel or its serial reference.  Both paths visit the
/// same indices with the same seeds and merge in index order, so results are
/// bit-identical.
enum class Execution { Serial, Parallel };

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for sub-stream `index` of `master`; independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::uint64_t index) { return Rng(derive_seed(master, index)); }

/// Sets the OpenMP team size used by Execution::Parallel (0 = runtime default).
void set_thread_count(int threads);
int thread_count();

/// Calls body(i) for i in [0, count).  Exceptions thrown inside the parallel
/// region are captured and the first one is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace vanspec
