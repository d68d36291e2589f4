#include "prc/barhinge/backend.hpp"

#include <algorithm>
#include <thread>
#include <vector>

#include "prc/error.hpp"

namespace prc {

CpuBackend::CpuBackend(unsigned threads, Index grain)
    : threads_(threads ? threads : std::max(1u, std::thread::hardware_concurrency())), grain_(std::max<Index>(1, grain)) {}

void CpuBackend::parallel_for(Index n, const std::function<void(Index, Index)>& body) const {
  if (n <= 0) return;
  const Index workers = std::min<Index>(threads_, (n + grain_ - 1) / grain_);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const Index chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    const Index begin = w * chunk, end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  // Lowest-index failure wins so the reported error is reproducible.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

const Backend& default_backend() {
  static const CpuBackend backend;
  return backend;
}

std::unique_ptr<Backend> make_backend(const std::string& name) {
  if (name == "cpu") return std::make_unique<CpuBackend>();
  throw ParameterError("unknown backend '" + name + "' (available: cpu)");
}

}  // namespace prc
