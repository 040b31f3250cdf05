#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace form {

/// Worker count from FORM_LAB_THREADS, else hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = default_worker_count());

/// Stateless 64-bit mixer (splitmix64 finalizer) used to derive per-item RNG seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace form
