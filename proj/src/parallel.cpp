#include "retrobell/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace retrobell {

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("RETROBELL_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  try {
    const int n = std::stoi(env);
    return n <= 0 ? hw : n;
  } catch (const std::exception&) {
    return hw;
  }
}

void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  const std::size_t workers =
      std::min<std::size_t>(chunks, static_cast<std::size_t>(worker_count()));

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    fn(c, begin, std::min(n, begin + chunk_size));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace retrobell
