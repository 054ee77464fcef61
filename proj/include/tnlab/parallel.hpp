// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tnlab {

/// Worker count from TNLAB_WORKERS when set, else `requested`, else the
/// hardware concurrency.
unsigned resolve_workers(unsigned requested = 0);

/// Fixed pool running index loops. Results must be written to per-index
/// slots by the callee, which keeps every reduction in caller order.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const { return static_cast<unsigned>(threads_.size()) + 1; }
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable wake_, done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0, next_ = 0, finished_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace tnlab
