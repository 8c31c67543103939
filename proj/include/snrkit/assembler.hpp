#pragma once

#include "snrkit/program.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace snr {

/// Builds register-machine programs with symbolic jump labels.
class Assembler {
 public:
  struct Label {
    std::size_t id;
  };

  Label label() {
    targets_.push_back(kUnbound);
    return {targets_.size() - 1};
  }

  /// Binds `l` to the next emitted instruction.
  Assembler& bind(Label l) {
    targets_.at(l.id) = code_.size();
    return *this;
  }

  Assembler& zero(Natural r) { return emit(Z(std::move(r))); }
  Assembler& succ(Natural r) { return emit(S(std::move(r))); }
  Assembler& copy(Natural from, Natural to) { return emit(T(std::move(from), std::move(to))); }
  Assembler& load(Natural r, Natural k) { return emit(C(std::move(r), std::move(k))); }
  Assembler& query(Natural from, Natural to) { return emit(O(std::move(from), std::move(to))); }
  Assembler& call(Natural base, Natural to) { return emit(U(std::move(base), std::move(to))); }
  Assembler& specialize(Natural base, Natural to) { return emit(M(std::move(base), std::move(to))); }

  Assembler& jump_eq(Natural m, Natural n, Label l) {
    fixups_.push_back({code_.size(), l.id});
    return emit(J(std::move(m), std::move(n), 0));
  }
  Assembler& jump(Label l) { return jump_eq(0, 0, l); }

  /// Jump past the end, i.e. halt.
  Assembler& halt() {
    halt_fixups_.push_back(code_.size());
    return emit(J(0, 0, 0));
  }

  /// Loop forever.
  Assembler& diverge() {
    Label self = label();
    bind(self);
    return jump(self);
  }

  Assembler& append(const Program& p) {
    const std::size_t offset = code_.size();
    for (auto ins : p) {
      if (ins.op == Op::Jump) {
        if (ins.arg[2] >= p.size()) {
          halt_fixups_.push_back(code_.size());
        } else {
          ins.arg[2] += offset;
        }
      }
      code_.push_back(std::move(ins));
    }
    return *this;
  }

  std::size_t size() const { return code_.size(); }

  Program finish() const {
    Program out = code_;
    for (auto [at, id] : fixups_) {
      if (targets_[id] == kUnbound) throw std::logic_error("assembler: unbound label");
      out[at].arg[2] = targets_[id];
    }
    for (auto at : halt_fixups_) out[at].arg[2] = out.size();
    return out;
  }

 private:
  static constexpr std::size_t kUnbound = static_cast<std::size_t>(-1);

  Assembler& emit(Instruction ins) {
    code_.push_back(std::move(ins));
    return *this;
  }

  struct Fixup {
    std::size_t at;
    std::size_t label;
  };
  Program code_;
  std::vector<std::size_t> targets_;
  std::vector<Fixup> fixups_;
  std::vector<std::size_t> halt_fixups_;
};

}  // namespace snr
