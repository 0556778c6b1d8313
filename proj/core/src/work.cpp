#include "dpar/work.hpp"

namespace dpar {

namespace {
thread_local WorkCounter* t_current = nullptr;
}

void WorkCounter::add(std::string_view phase, std::uint64_t units) {
  auto it = phases_.find(phase);
  if (it == phases_.end()) it = phases_.emplace(std::string(phase), 0).first;
  it->second += units;
  total_ += units;
}

std::uint64_t WorkCounter::phase(std::string_view name) const {
  auto it = phases_.find(name);
  return it == phases_.end() ? 0 : it->second;
}

void WorkCounter::clear() {
  phases_.clear();
  total_ = 0;
}

WorkScope::WorkScope(WorkCounter& counter) : previous_(t_current) { t_current = &counter; }
WorkScope::~WorkScope() { t_current = previous_; }

void charge(std::string_view phase, std::uint64_t units) {
  if (t_current != nullptr && units != 0) t_current->add(phase, units);
}

}  // namespace dpar
