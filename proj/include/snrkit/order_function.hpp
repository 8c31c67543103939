#pragma once

#include "snrkit/machine.hpp"
#include "snrkit/natural.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace snr {

/// A bound function h: N -> N, meant to be recursive, nondecreasing and
/// unbounded with h(0) >= 2. Only the first two properties are checkable, and
/// only on a finite horizon (see order_validate).
class OrderFunction {
 public:
  using Fn = std::function<Natural(const Natural&)>;

  OrderFunction(std::string name, Fn fn, std::optional<Natural> constant = std::nullopt)
      : name_(std::move(name)), fn_(std::move(fn)), constant_(std::move(constant)) {}

  Natural operator()(const Natural& n) const { return fn_(n); }

  /// Convenience for small arguments used as string positions.
  std::uint64_t bound_at(std::uint64_t n) const { return clamp_u64(fn_(Natural(n))); }

  const std::string& name() const { return name_; }

  /// Set when the function is known to be constant, which lets callers skip
  /// computing arguments that cannot matter.
  const std::optional<Natural>& constant_value() const { return constant_; }

  static OrderFunction constant(Natural c) {
    return OrderFunction("const:" + c.str(), [c](const Natural&) { return c; }, c);
  }

  /// n |-> slope * n + offset.
  static OrderFunction linear(Natural slope, Natural offset) {
    return OrderFunction("linear:" + slope.str() + "," + offset.str(),
                         [slope, offset](const Natural& n) { return slope * n + offset; });
  }

  /// n |-> floor(log2(n + 1)) + offset.
  static OrderFunction log2(Natural offset) {
    return OrderFunction("log2:" + offset.str(), [offset](const Natural& n) {
      Natural v = n + 1;
      return Natural(boost::multiprecision::msb(v)) + offset;
    });
  }

  /// Table lookup, constant at the last entry beyond the table.
  static OrderFunction table(std::vector<Natural> values) {
    if (values.empty()) throw std::invalid_argument("order function table is empty");
    std::string name = "table:";
    for (std::size_t i = 0; i < values.size(); ++i) name += (i ? "," : "") + values[i].str();
    auto data = std::make_shared<const std::vector<Natural>>(std::move(values));
    return OrderFunction(name, [data](const Natural& n) {
      return n < data->size() ? (*data)[n.convert_to<std::size_t>()] : data->back();
    });
  }

  /// phi_e asserted total; evaluation exceeding the budget throws. Values are
  /// memoized (write-once, thread-safe).
  static OrderFunction program(ProgramIndex e, std::uint64_t budget) {
    struct Memo {
      std::mutex mu;
      std::map<Natural, Natural> values;
    };
    auto memo = std::make_shared<Memo>();
    std::string name = "program:" + e.value.str() + ":" + std::to_string(budget);
    return OrderFunction(name, [e = std::move(e), budget, memo](const Natural& n) {
      {
        std::lock_guard lock(memo->mu);
        if (auto it = memo->values.find(n); it != memo->values.end()) return it->second;
      }
      auto out = eval(e, {n}, budget);
      if (!out.halted()) {
        throw std::runtime_error("order function program exhausted its budget at " + n.str());
      }
      std::lock_guard lock(memo->mu);
      return memo->values.try_emplace(n, out.value).first->second;
    });
  }

  /// Parses "const:C", "linear:A,B", "log2:C", "table:v0,v1,..." or
  /// "program:E:BUDGET".
  static OrderFunction parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad bound-function spec '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    auto split = [](const std::string& s, char sep) {
      std::vector<std::string> parts;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, sep)) parts.push_back(item);
      return parts;
    };
    if (kind == "const") return constant(parse_natural(rest));
    if (kind == "log2") return log2(parse_natural(rest));
    if (kind == "linear") {
      auto parts = split(rest, ',');
      if (parts.size() != 2) throw std::invalid_argument("linear spec needs A,B");
      return linear(parse_natural(parts[0]), parse_natural(parts[1]));
    }
    if (kind == "table") {
      std::vector<Natural> values;
      for (const auto& p : split(rest, ',')) values.push_back(parse_natural(p));
      return table(std::move(values));
    }
    if (kind == "program") {
      auto parts = split(rest, ':');
      if (parts.size() != 2) throw std::invalid_argument("program spec needs E:BUDGET");
      return program(ProgramIndex{parse_natural(parts[0])}, to_u64(parse_natural(parts[1])));
    }
    throw std::invalid_argument("unknown bound-function kind '" + kind + "'");
  }

 private:
  std::string name_;
  Fn fn_;
  std::optional<Natural> constant_;
};

struct OrderReport {
  bool ok = true;
  std::optional<std::uint64_t> failing_n;  // least n where a check failed
  std::string reason;
  Natural max_value = 0;
  bool increased = false;  // growth seen on the horizon
};

/// Checks h(0) >= 2 and h(n) <= h(n+1) for n < horizon.
inline OrderReport order_validate(const OrderFunction& h, std::uint64_t horizon) {
  OrderReport r;
  Natural prev = h(0);
  r.max_value = prev;
  if (prev < 2) {
    r.ok = false;
    r.failing_n = 0;
    r.reason = "h(0) < 2";
    return r;
  }
  for (std::uint64_t n = 0; n < horizon; ++n) {
    Natural next = h(n + 1);
    if (next < prev) {
      r.ok = false;
      r.failing_n = n;
      r.reason = "h(" + std::to_string(n) + ") > h(" + std::to_string(n + 1) + ")";
      return r;
    }
    if (next > prev) r.increased = true;
    prev = std::move(next);
  }
  r.max_value = prev;
  if (!r.increased) r.reason = "no increase on horizon";
  return r;
}

}  // namespace snr
