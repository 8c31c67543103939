#pragma once

#include "snrkit/natural.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <vector>

namespace snr {

/// A caller-supplied total function N -> N with a record of every argument
/// queried (the use). Answers are memoized on first query, so repeated
/// queries agree even if the underlying callable is not pure.
class FunctionOracle {
 public:
  using Fn = std::function<Natural(const Natural&)>;

  explicit FunctionOracle(Fn fn) : state_(std::make_shared<State>()) { state_->fn = std::move(fn); }

  /// Table lookup; arguments beyond the table answer `fill`.
  static FunctionOracle table(std::vector<Natural> values, Natural fill = 0) {
    auto data = std::make_shared<const std::vector<Natural>>(std::move(values));
    return FunctionOracle([data, fill](const Natural& x) {
      return x < data->size() ? (*data)[x.convert_to<std::size_t>()] : fill;
    });
  }

  Natural operator()(const Natural& x) const {
    std::lock_guard lock(state_->mu);
    state_->log.insert(x);
    if (auto it = state_->memo.find(x); it != state_->memo.end()) return it->second;
    return state_->memo.emplace(x, state_->fn(x)).first->second;
  }

  std::set<Natural> queries() const {
    std::lock_guard lock(state_->mu);
    return state_->log;
  }

  void clear_log() const {
    std::lock_guard lock(state_->mu);
    state_->log.clear();
  }

 private:
  struct State {
    std::mutex mu;
    Fn fn;
    std::map<Natural, Natural> memo;
    std::set<Natural> log;
  };
  std::shared_ptr<State> state_;
};

}  // namespace snr
