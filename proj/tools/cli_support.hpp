#pragma once

#include "snrkit/immunity.hpp"
#include "snrkit/order_function.hpp"
#include "snrkit/program.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace snr::cli {

using json = nlohmann::ordered_json;

// Bad input: exit 2, no report.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// key = value lines; '#' comments; blank lines skipped.
inline std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

inline json to_json(const Natural& n) {
  if (fits_u64(n)) return to_u64(n);
  return n.str();
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Spec parsers. Anything malformed becomes a UsageError.

template <typename F>
auto usage_guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw UsageError(what + ": " + ex.what());
  }
}

// "N" is shorthand for const:N.
inline OrderFunction parse_order(const std::string& spec) {
  return usage_guard("bound function '" + spec + "'", [&] {
    return all_digits(spec) ? OrderFunction::constant(parse_natural(spec)) : OrderFunction::parse(spec);
  });
}

inline FunctionOracle as_oracle(const OrderFunction& h) {
  return FunctionOracle([h](const Natural& x) { return h(x); });
}

// A decimal index, or a path to a .urm file (relative to base).
inline ProgramIndex parse_program_ref(const std::string& ref, const std::filesystem::path& base = {}) {
  return usage_guard("program '" + ref + "'", [&] {
    if (all_digits(ref)) return ProgramIndex{parse_natural(ref)};
    std::filesystem::path p(ref);
    if (p.is_relative() && !base.empty()) p = base / p;
    return encode_program(parse_program(read_file(p.string())));
  });
}

// all | none | evens | multiples:M | table:a,b,c;UPTO | program:REF:BUDGET
inline SetPredicate parse_set(const std::string& spec) {
  return usage_guard("set '" + spec + "'", [&] {
    if (spec == "all") return SetPredicate::all();
    if (spec == "none") return SetPredicate::none();
    if (spec == "evens") return SetPredicate::evens();
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("unknown set kind");
    const auto kind = spec.substr(0, colon);
    const auto rest = spec.substr(colon + 1);
    if (kind == "multiples") {
      auto m = to_u64(parse_natural(rest));
      if (m == 0) throw UsageError("multiples of 0");
      return SetPredicate::multiples(m);
    }
    if (kind == "table") {
      auto semi = rest.find(';');
      if (semi == std::string::npos) throw UsageError("table needs members;decided_up_to");
      FiniteSet members;
      for (const auto& t : split(rest.substr(0, semi), ','))
        if (!t.empty()) members.push_back(to_u64(parse_natural(t)));
      std::sort(members.begin(), members.end());
      return SetPredicate::table(members, to_u64(parse_natural(trim(rest.substr(semi + 1)))));
    }
    if (kind == "program") {
      auto last = rest.rfind(':');
      if (last == std::string::npos) throw UsageError("program needs REF:BUDGET");
      return SetPredicate::program(parse_program_ref(rest.substr(0, last)), to_u64(parse_natural(rest.substr(last + 1))));
    }
    throw UsageError("unknown set kind '" + kind + "'");
  });
}

// Numbering file:
//   kind = table            kind = program
//   0: 1,2,3                program = canon.urm   (phi(e) = bit code of D_e)
//   1:                      budget = 1000
struct NumberingFile {
  Numbering numbering = Numbering::canonical();
  std::string kind;
  std::optional<std::vector<FiniteSet>> table;
  json echo;
};

inline NumberingFile load_numbering(const std::string& path) {
  return usage_guard("numbering '" + path + "'", [&] {
    NumberingFile out;
    std::map<std::string, std::string> header;
    std::map<std::uint64_t, FiniteSet> rows;
    std::istringstream in(read_file(path));
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto where = path + ":" + std::to_string(lineno);
      if (auto eq = line.find('='); eq != std::string::npos) {
        header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      } else if (auto colon = line.find(':'); colon != std::string::npos) {
        auto e = to_u64(parse_natural(trim(line.substr(0, colon))));
        FiniteSet s;
        for (const auto& t : split(line.substr(colon + 1), ','))
          if (!t.empty()) s.push_back(to_u64(parse_natural(t)));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (!rows.emplace(e, s).second) throw UsageError(where + ": duplicate entry " + std::to_string(e));
      } else {
        throw UsageError(where + ": expected 'key = value' or 'e: members'");
      }
    }
    out.kind = header.count("kind") ? header["kind"] : "";
    out.echo = {{"kind", out.kind}};
    if (out.kind == "table") {
      std::vector<FiniteSet> table(rows.empty() ? 0 : rows.rbegin()->first + 1);
      for (auto& [e, s] : rows) table[e] = s;
      out.echo["entries"] = table.size();
      out.table = table;
      out.numbering = Numbering::from_table("table", table);
    } else if (out.kind == "program") {
      if (!rows.empty()) throw UsageError("program numbering takes no entries");
      if (!header.count("program") || !header.count("budget")) throw UsageError("program numbering needs program and budget");
      auto base = std::filesystem::path(path).parent_path();
      auto e = parse_program_ref(header["program"], base);
      auto budget = to_u64(parse_natural(header["budget"]));
      out.echo["program"] = e.value.str();
      out.echo["budget"] = budget;
      out.numbering = Numbering("program", [e, budget](std::uint64_t i) -> std::optional<FiniteSet> {
        auto r = eval(e, {Natural(i)}, budget);
        if (!r.halted() || !fits_u64(r.value)) return std::nullopt;
        return canonical_finite_set(to_u64(r.value));
      });
    } else {
      throw UsageError("numbering kind must be table or program");
    }
    return out;
  });
}

// Family file: one "path role" per line; paths relative to the file.
struct FamilyMember {
  std::string path;
  std::string role;
  ProgramIndex index;
};

inline std::vector<FamilyMember> load_family(const std::string& path) {
  return usage_guard("family '" + path + "'", [&] {
    std::vector<FamilyMember> out;
    auto base = std::filesystem::path(path).parent_path();
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      FamilyMember m;
      if (!(ls >> m.path)) continue;
      if (!(ls >> m.role)) m.role = "decider";
      m.index = parse_program_ref(m.path, base);
      out.push_back(std::move(m));
    }
    if (out.empty()) throw UsageError("empty family");
    return out;
  });
}

inline json set_json(const FiniteSet& s) { return json(s); }

}  // namespace snr::cli
