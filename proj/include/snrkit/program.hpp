#pragma once

#include "snrkit/natural.hpp"
#include "snrkit/pairing.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace snr {

/// Register machine instruction set.
///
///   Z n      R_n := 0
///   S n      R_n := R_n + 1
///   T m n    R_n := R_m
///   J m n q  if R_m = R_n jump to instruction q (0-based)
///   O m n    R_n := oracle(R_m); blocks forever if the oracle is undefined there
///   C n k    R_n := k
///   U m n    R_n := phi_{R_m}(R_{m+1}, ..., R_{m+kCallArity})
///   M m n    R_n := smn(R_m, (R_{m+1}))
///
/// The last three make index-valued programs (universal transpose, fixed
/// points) runnable at desk budgets.
enum class Op : std::uint8_t {
  Zero = 0,
  Succ = 1,
  Transfer = 2,
  Jump = 3,
  Oracle = 4,
  Const = 5,
  Call = 6,
  Spec = 7,
};

inline constexpr std::size_t kOpCount = 8;
inline constexpr std::size_t kCallArity = 8;

constexpr std::size_t operand_count(Op op) {
  switch (op) {
    case Op::Zero:
    case Op::Succ:
      return 1;
    case Op::Jump:
      return 3;
    default:
      return 2;
  }
}

constexpr char mnemonic(Op op) {
  constexpr char names[] = {'Z', 'S', 'T', 'J', 'O', 'C', 'U', 'M'};
  return names[static_cast<std::size_t>(op)];
}

struct Instruction {
  Op op = Op::Zero;
  std::array<Natural, 3> arg{};

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline Instruction Z(Natural n) { return {Op::Zero, {std::move(n), 0, 0}}; }
inline Instruction S(Natural n) { return {Op::Succ, {std::move(n), 0, 0}}; }
inline Instruction T(Natural m, Natural n) { return {Op::Transfer, {std::move(m), std::move(n), 0}}; }
inline Instruction J(Natural m, Natural n, Natural q) {
  return {Op::Jump, {std::move(m), std::move(n), std::move(q)}};
}
inline Instruction O(Natural m, Natural n) { return {Op::Oracle, {std::move(m), std::move(n), 0}}; }
inline Instruction C(Natural n, Natural k) { return {Op::Const, {std::move(n), std::move(k), 0}}; }
inline Instruction U(Natural m, Natural n) { return {Op::Call, {std::move(m), std::move(n), 0}}; }
inline Instruction M(Natural m, Natural n) { return {Op::Spec, {std::move(m), std::move(n), 0}}; }

using Program = std::vector<Instruction>;

/// Strong type for a Goedel number.
struct ProgramIndex {
  Natural value;

  friend bool operator==(const ProgramIndex&, const ProgramIndex&) = default;
  friend bool operator<(const ProgramIndex& a, const ProgramIndex& b) { return a.value < b.value; }
};

// ---------------------------------------------------------------------------
// Numbering.
//
// instruction  <->  8 * tau_k^{-1}(operands) + opcode          (bijective)
// program      <->  0 for the empty program, otherwise 1 + the bijective
//                   base-3 value of the word c_1 3 c_2 3 ... 3 c_m, where
//                   c_i is the bijective base-2 numeral of instruction code i.
// Every natural decodes, and both round trips are exact.
// ---------------------------------------------------------------------------

inline Natural encode_instruction(const Instruction& ins) {
  const std::size_t k = operand_count(ins.op);
  std::vector<Natural> ops(ins.arg.begin(), ins.arg.begin() + static_cast<std::ptrdiff_t>(k));
  return tuple_encode(k, ops) * kOpCount + static_cast<unsigned>(ins.op);
}

inline Instruction decode_instruction(const Natural& code) {
  Instruction ins;
  ins.op = static_cast<Op>(static_cast<unsigned>(code % kOpCount));
  const std::size_t k = operand_count(ins.op);
  auto ops = tuple_decode(k, code / kOpCount);
  for (std::size_t i = 0; i < k; ++i) ins.arg[i] = std::move(ops[i]);
  return ins;
}

namespace detail {

/// Bijective base-`base` digits (values 1..base), most significant first.
inline void append_bijective_digits(Natural n, unsigned base, std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> rev;
  while (n > 0) {
    unsigned r = static_cast<unsigned>(n % base);
    if (r == 0) r = base;
    rev.push_back(static_cast<std::uint8_t>(r));
    n = (n - r) / base;
  }
  out.insert(out.end(), rev.rbegin(), rev.rend());
}

inline Natural bijective_value(const std::uint8_t* first, const std::uint8_t* last, unsigned base) {
  Natural v = 0;
  for (; first != last; ++first) v = v * base + *first;
  return v;
}

}  // namespace detail

inline ProgramIndex encode_program(const Program& p) {
  if (p.empty()) return {0};
  std::vector<std::uint8_t> word;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) word.push_back(3);
    detail::append_bijective_digits(encode_instruction(p[i]), 2, word);
  }
  return {1 + detail::bijective_value(word.data(), word.data() + word.size(), 3)};
}

inline Program decode_program(const ProgramIndex& e) {
  if (e.value < 0) throw std::invalid_argument("negative program index");
  Program p;
  if (e.value == 0) return p;
  std::vector<std::uint8_t> word;
  detail::append_bijective_digits(e.value - 1, 3, word);
  const std::uint8_t* base = word.data();
  std::size_t start = 0;
  for (std::size_t i = 0;; ++i) {
    if (i == word.size() || word[i] == 3) {
      p.push_back(decode_instruction(detail::bijective_value(base + start, base + i, 2)));
      if (i == word.size()) break;
      start = i + 1;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Text format (.urm): one instruction per line, '#' starts a comment.
// ---------------------------------------------------------------------------

inline Program parse_program(std::istream& in) {
  Program p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string mn;
    if (!(ls >> mn)) continue;
    if (mn.size() != 1) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown mnemonic '" + mn + "'");
    }
    constexpr char names[] = "ZSTJOCUM";
    const char* pos = std::find(names, names + kOpCount, mn[0]);
    if (pos == names + kOpCount) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown mnemonic '" + mn + "'");
    }
    Instruction ins;
    ins.op = static_cast<Op>(pos - names);
    for (std::size_t i = 0; i < operand_count(ins.op); ++i) {
      std::string tok;
      if (!(ls >> tok)) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": missing operand");
      }
      try {
        ins.arg[i] = parse_natural(tok);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad operand '" + tok + "'");
      }
    }
    std::string extra;
    if (ls >> extra) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
    }
    p.push_back(std::move(ins));
  }
  return p;
}

inline Program parse_program(const std::string& text) {
  std::istringstream in(text);
  return parse_program(in);
}

inline Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program file '" + path + "'");
  return parse_program(in);
}

inline std::string format_program(const Program& p) {
  std::string out;
  for (const auto& ins : p) {
    out += mnemonic(ins.op);
    for (std::size_t i = 0; i < operand_count(ins.op); ++i) {
      out += ' ';
      out += ins.arg[i].str();
    }
    out += '\n';
  }
  return out;
}

}  // namespace snr
