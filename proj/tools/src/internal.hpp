#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "json.hpp"
#include "slag/cli/app.hpp"

namespace slag::cli::detail {

using Json = nlohmann::ordered_json;

// Runs fn(0..count-1) on a small thread pool. Callers write into per-index
// slots, so results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

PhaseSpec resolve_phase(const RunConfig& config);

/// Eigenvalue data from --a or --family, unsorted and unvalidated beyond length.
std::vector<double> resolve_lambda(const RunConfig& config, const PhaseSpec& phase);

Json number_array(const std::vector<double>& values);

/// CSV cell for a double: shortest round-trip text, "nan"/"inf" otherwise.
std::string csv_number(double value);

}  // namespace slag::cli::detail
