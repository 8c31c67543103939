#pragma once

#include "snrkit/natural.hpp"
#include "snrkit/program.hpp"
#include "snrkit/specialize.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace snr {

/// Oracle for O-instructions. A finite string tau answers queries x < |tau|
/// and blocks forever on anything else; a function oracle may also block by
/// returning nullopt.
class Oracle {
 public:
  using Query = std::function<std::optional<Natural>(const Natural&)>;

  Oracle() = default;
  explicit Oracle(Query q) : query_(std::move(q)) {}

  static Oracle none() { return Oracle(); }

  static Oracle string(std::vector<Natural> tau) {
    auto data = std::make_shared<const std::vector<Natural>>(std::move(tau));
    return Oracle([data](const Natural& x) -> std::optional<Natural> {
      if (x < 0 || x >= data->size()) return std::nullopt;
      return (*data)[x.convert_to<std::size_t>()];
    });
  }

  template <typename Int>
  static Oracle string(std::span<const Int> tau) {
    std::vector<Natural> v(tau.begin(), tau.end());
    return string(std::move(v));
  }

  std::optional<Natural> query(const Natural& x) const {
    if (!query_) return std::nullopt;
    return query_(x);
  }

 private:
  Query query_;
};

enum class EvalStatus { Halted, Exhausted };

struct EvalOutcome {
  EvalStatus status = EvalStatus::Exhausted;
  Natural value = 0;
  std::uint64_t steps_used = 0;

  bool halted() const { return status == EvalStatus::Halted; }
  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

namespace detail {

/// Program with registers renamed to dense slots and jump targets clamped.
struct CompiledProgram {
  struct Ins {
    Op op;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t target = 0;  // jump target, or constant-pool index for C
  };
  std::vector<Ins> code;
  std::vector<Natural> constants;
  std::vector<std::uint32_t> io_slots;  // slots of R0..R_kCallArity
  std::uint32_t slot_count = 0;
  // For U m n: slots of R_{m+1}..R_{m+kCallArity}, stored per instruction.
  std::vector<std::vector<std::uint32_t>> call_args;
};

inline std::shared_ptr<const CompiledProgram> compile(const Program& p) {
  auto cp = std::make_shared<CompiledProgram>();
  std::map<Natural, std::uint32_t> slots;
  auto slot = [&](const Natural& r) {
    auto [it, inserted] = slots.try_emplace(r, static_cast<std::uint32_t>(slots.size()));
    return it->second;
  };
  for (std::size_t r = 0; r <= kCallArity; ++r) cp->io_slots.push_back(slot(r));
  const Natural len = p.size();
  for (const auto& ins : p) {
    CompiledProgram::Ins c{ins.op};
    switch (ins.op) {
      case Op::Zero:
      case Op::Succ:
        c.a = slot(ins.arg[0]);
        break;
      case Op::Transfer:
      case Op::Oracle:
        c.a = slot(ins.arg[0]);
        c.b = slot(ins.arg[1]);
        break;
      case Op::Jump:
        c.a = slot(ins.arg[0]);
        c.b = slot(ins.arg[1]);
        c.target = static_cast<std::uint32_t>(ins.arg[2] >= len ? p.size() : ins.arg[2].convert_to<std::size_t>());
        break;
      case Op::Const:
        c.a = slot(ins.arg[0]);
        c.target = static_cast<std::uint32_t>(cp->constants.size());
        cp->constants.push_back(ins.arg[1]);
        break;
      case Op::Call: {
        c.a = slot(ins.arg[0]);
        c.b = slot(ins.arg[1]);
        std::vector<std::uint32_t> args;
        for (std::size_t i = 1; i <= kCallArity; ++i) args.push_back(slot(ins.arg[0] + i));
        c.target = static_cast<std::uint32_t>(cp->call_args.size());
        cp->call_args.push_back(std::move(args));
        break;
      }
      case Op::Spec:
        c.a = slot(ins.arg[0]);
        c.b = slot(ins.arg[1]);
        c.target = slot(ins.arg[0] + 1);
        break;
    }
    cp->code.push_back(c);
  }
  cp->slot_count = static_cast<std::uint32_t>(slots.size());
  return cp;
}

/// Per-thread memo of compiled programs, keyed by index.
inline std::shared_ptr<const CompiledProgram> compiled(const Natural& index) {
  thread_local std::map<Natural, std::shared_ptr<const CompiledProgram>> cache;
  if (auto it = cache.find(index); it != cache.end()) return it->second;
  if (cache.size() > 4096) cache.clear();
  auto cp = compile(decode_program(ProgramIndex{index}));
  cache.emplace(index, cp);
  return cp;
}

}  // namespace detail

/// Step-bounded evaluation of phi_e(args), relative to `oracle`. Every executed
/// instruction costs one step, including oracle queries and calls (the callee's
/// steps are charged to the same budget).
inline EvalOutcome eval(const ProgramIndex& e, std::span<const Natural> args, std::uint64_t budget,
                        const Oracle& oracle = Oracle::none()) {
  using detail::CompiledProgram;
  struct Frame {
    std::shared_ptr<const CompiledProgram> prog;
    std::vector<Natural> regs;
    std::size_t pc = 0;
    std::uint32_t ret_slot = 0;
  };
  auto make_frame = [](std::shared_ptr<const CompiledProgram> prog) {
    Frame f;
    f.regs.assign(prog->slot_count, Natural(0));
    f.prog = std::move(prog);
    return f;
  };

  if (args.size() > kCallArity) throw std::invalid_argument("eval: more than 8 arguments");
  std::vector<Frame> stack;
  stack.push_back(make_frame(detail::compiled(e.value)));
  for (std::size_t i = 0; i < args.size(); ++i) {
    stack.back().regs[stack.back().prog->io_slots[i + 1]] = args[i];
  }

  std::uint64_t steps = 0;
  const EvalOutcome exhausted{EvalStatus::Exhausted, 0, budget};
  while (true) {
    Frame& f = stack.back();
    const CompiledProgram& prog = *f.prog;
    if (f.pc >= prog.code.size()) {
      Natural value = std::move(f.regs[prog.io_slots[0]]);
      const std::uint32_t ret = f.ret_slot;
      stack.pop_back();
      if (stack.empty()) return {EvalStatus::Halted, std::move(value), steps};
      stack.back().regs[ret] = std::move(value);
      ++stack.back().pc;
      continue;
    }
    if (steps >= budget) return exhausted;
    ++steps;
    const auto& ins = prog.code[f.pc];
    switch (ins.op) {
      case Op::Zero:
        f.regs[ins.a] = 0;
        ++f.pc;
        break;
      case Op::Succ:
        ++f.regs[ins.a];
        ++f.pc;
        break;
      case Op::Transfer:
        f.regs[ins.b] = f.regs[ins.a];
        ++f.pc;
        break;
      case Op::Jump:
        f.pc = f.regs[ins.a] == f.regs[ins.b] ? ins.target : f.pc + 1;
        break;
      case Op::Oracle: {
        auto answer = oracle.query(f.regs[ins.a]);
        if (!answer) return exhausted;
        f.regs[ins.b] = std::move(*answer);
        ++f.pc;
        break;
      }
      case Op::Const:
        f.regs[ins.a] = prog.constants[ins.target];
        ++f.pc;
        break;
      case Op::Spec: {
        Natural fixed[] = {f.regs[ins.target]};
        f.regs[ins.b] = smn(ProgramIndex{f.regs[ins.a]}, fixed).value;
        ++f.pc;
        break;
      }
      case Op::Call: {
        Frame callee = make_frame(detail::compiled(f.regs[ins.a]));
        const auto& arg_slots = prog.call_args[ins.target];
        for (std::size_t i = 0; i < kCallArity; ++i) {
          callee.regs[callee.prog->io_slots[i + 1]] = f.regs[arg_slots[i]];
        }
        callee.ret_slot = ins.b;
        stack.push_back(std::move(callee));  // invalidates f
        break;
      }
    }
  }
}

inline EvalOutcome eval(const ProgramIndex& e, std::initializer_list<Natural> args, std::uint64_t budget,
                        const Oracle& oracle = Oracle::none()) {
  return eval(e, std::span<const Natural>(args.begin(), args.size()), budget, oracle);
}

inline EvalOutcome eval(const Program& p, std::initializer_list<Natural> args, std::uint64_t budget,
                        const Oracle& oracle = Oracle::none()) {
  return eval(encode_program(p), args, budget, oracle);
}

}  // namespace snr
