#pragma once

#include <functional>
#include <memory>
#include <string>

#include "prc/schema/types.hpp"

namespace prc {

/// Execution backend for element-parallel loops. Implementations may split
/// [0, n) arbitrarily; callers write only to per-element slots, so results
/// never depend on the split.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual void parallel_for(Index n, const std::function<void(Index begin, Index end)>& body) const = 0;
};

/// Thread-pool-free CPU backend: spawns up to `threads` workers per loop once
/// the loop is longer than `grain`, otherwise runs inline.
class CpuBackend final : public Backend {
 public:
  explicit CpuBackend(unsigned threads = 0, Index grain = 4096);
  std::string name() const override { return "cpu"; }
  void parallel_for(Index n, const std::function<void(Index, Index)>& body) const override;
  unsigned threads() const { return threads_; }

 private:
  unsigned threads_;
  Index grain_;
};

const Backend& default_backend();

/// Backend by name; only "cpu" exists. Unknown names raise ParameterError.
std::unique_ptr<Backend> make_backend(const std::string& name);

}  // namespace prc
