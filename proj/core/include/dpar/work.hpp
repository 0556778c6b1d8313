#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace dpar {

// Abstract work units: one per adjacency entry touched, one per element per
// sort pass, one per prefix-sum element.
class WorkCounter {
 public:
  void add(std::string_view phase, std::uint64_t units);
  std::uint64_t total() const { return total_; }
  std::uint64_t phase(std::string_view name) const;
  const std::map<std::string, std::uint64_t, std::less<>>& phases() const { return phases_; }
  void clear();

 private:
  std::map<std::string, std::uint64_t, std::less<>> phases_;
  std::uint64_t total_ = 0;
};

// Installs a counter as the sink for charge() on this thread.
class WorkScope {
 public:
  explicit WorkScope(WorkCounter& counter);
  ~WorkScope();
  WorkScope(const WorkScope&) = delete;
  WorkScope& operator=(const WorkScope&) = delete;

 private:
  WorkCounter* previous_;
};

void charge(std::string_view phase, std::uint64_t units);

}  // namespace dpar
