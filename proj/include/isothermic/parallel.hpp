#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <vector>

namespace isothermic {

enum class Execution { serial, parallel };

// Runs fn(i) for i in [0, count). The parallel path uses OpenMP; exceptions are
// captured per index and the lowest-index one is rethrown, so both paths fail
// identically.
template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Results stored by index, so reductions over them are order-independent.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t count, Execution exec, Fn&& fn) {
  std::vector<T> out(count);
  for_each_index(count, exec, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

// Generator for sample i, independent of scheduling.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace isothermic
