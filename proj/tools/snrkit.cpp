#include "cli_support.hpp"

#include "snrkit/bushy.hpp"
#include "snrkit/forcing.hpp"
#include "snrkit/immunity.hpp"
#include "snrkit/io_match.hpp"
#include "snrkit/pandemic.hpp"
#include "snrkit/reductions.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>

using namespace snr;
using namespace snr::cli;

namespace {

struct Run {
  json checks = json::array();
  json results = json::object();

  void check(const std::string& name, const std::string& status, json detail = json::object()) {
    json c = {{"name", name}, {"status", status}};
    if (!detail.empty()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
  }
  void check(const std::string& name, bool ok, json detail = json::object()) {
    check(name, std::string(ok ? "pass" : "fail"), std::move(detail));
  }
  bool failed() const {
    for (const auto& c : checks)
      if (c["status"] == "fail") return true;
    return false;
  }
};

// Every option the subcommands read. Defaults appear in the config echo.
struct Options {
  std::string output;
  // verify-lemmas
  std::string alphabet = "2";
  std::size_t maxlen = 2, nmax = 3, mmax = 3, union_cap = 8, closure_cap = 20;
  std::uint64_t random_trials = 0;
  // shared
  std::string h, g, r = "evens", f = "1000000", numbering, family, bound;
  std::uint64_t horizon = 8, seed = 1, oracles = 20, budget = 10000, check_budget = 12000;
  // run-reduction
  std::string theorem;
  std::uint64_t values = 10, step_cap = 500;
  // forcing
  std::uint64_t stages = 6, oracle_budget = 1000, use_depth = 1, universe_cap = 2'000'000, pi_cap = 100'000,
                max_g = 64;
  std::vector<std::string> machines;
  // numberings
  std::string kind;
  std::uint64_t cmax = 4, measure_cap = 400, search_cap = 1 << 20, min_witnesses = 1;
  // eval
  std::string program;
  std::vector<std::string> args, oracle;
  std::string expect;
};

std::uint64_t oracle_seed(std::uint64_t seed, std::uint64_t i) { return seeded_hash(seed, i); }

// --- verify-lemmas -----------------------------------------------------------

json lemma_json(const bushy::LemmaReport& r) {
  json j = {{"lemma", r.lemma}, {"parameters", r.parameters}, {"checked_count", r.checked}, {"refused", r.refused}};
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  return j;
}

void record_lemma(Run& run, const bushy::LemmaReport& r) {
  run.results["lemmas"].push_back(lemma_json(r));
  run.check(r.lemma, r.refused ? std::string("refused") : std::string(r.passed() ? "pass" : "fail"),
            {{"checked_count", r.checked}});
}

void verify_lemmas(const Options& o, Run& run) {
  bushy::Alphabet a(parse_order(o.alphabet));
  run.results["lemmas"] = json::array();
  record_lemma(run, bushy::verify_smallness_union(a, o.maxlen, o.nmax, o.mmax, o.union_cap));
  record_lemma(run, bushy::verify_closure(a, o.maxlen, o.nmax, o.closure_cap));
  if (o.random_trials) {
    record_lemma(run, bushy::verify_smallness_union_random(a, o.maxlen, o.nmax, o.mmax, o.random_trials, o.seed));
    record_lemma(run, bushy::verify_closure_random(a, o.maxlen, o.nmax, o.random_trials, o.seed));
  }
}

// --- run-reduction -----------------------------------------------------------

void given_h(const Options& o, const OrderFunction& h, Run& run) {
  auto red = usage_guard("reduction given h", [&] { return dnr_to_snpr_given_h(h, o.horizon); });
  auto order = order_validate(red.g, o.horizon);
  run.check("g_is_order", order.ok, {{"reason", order.reason}});
  json ivs = json::array();
  for (const auto& iv : red.intervals) ivs.push_back({{"n", iv.n}, {"lo", iv.lo}, {"hi", iv.hi}, {"m", to_json(iv.m)}});
  run.results["intervals"] = ivs;
  run.results["g"] = red.g.name();
  std::uint64_t bound_failures = 0, collisions = 0, points = 0;
  json first_failures = json::array();
  for (std::uint64_t i = 0; i < o.oracles; ++i) {
    auto f = random_dnr_oracle(oracle_seed(o.seed, i), red.g, o.check_budget);
    for (const auto& iv : red.intervals) {
      for (std::uint64_t x = iv.lo; x <= iv.hi; ++x) {
        ++points;
        const Natural fx = red.F.apply(f, x);
        if (fx >= h(x)) {
          ++bound_failures;
          if (first_failures.size() < 10) first_failures.push_back({{"oracle", i}, {"x", x}, {"kind", "bound"}});
        }
        for (std::uint64_t e = 0; e < iv.n; ++e) {
          auto r = memo_eval(e, x, o.budget);
          if (r.halted() && r.value == fx) {
            ++collisions;
            if (first_failures.size() < 10)
              first_failures.push_back({{"oracle", i}, {"x", x}, {"e", e}, {"kind", "collision"}});
          }
        }
      }
    }
  }
  run.results["points_checked"] = points;
  run.results["failures"] = first_failures;
  run.check("output_bound", bound_failures == 0, {{"failures", bound_failures}});
  run.check("avoidance", collisions == 0, {{"collisions", collisions}});
}

void given_g(const Options& o, const OrderFunction& g, Run& run) {
  auto red = usage_guard("reduction given g", [&] { return dnr_to_snpr_given_g(g, o.horizon); });
  json hs = json::array();
  for (std::uint64_t n = 0; n <= o.horizon; ++n) hs.push_back(to_json(red.h(n)));
  run.results["h"] = hs;
  std::uint64_t over = 0, bad = 0;
  json collisions = json::array();
  for (std::uint64_t i = 0; i < o.oracles; ++i) {
    auto f = random_bounded_oracle(oracle_seed(o.seed, i), g);
    for (std::uint64_t n = 1; n <= o.horizon; ++n)
      if (red.j.apply(f, n) > red.h(n)) ++over;
    for (const auto& c : snpr_collisions(red, f, o.horizon, o.budget)) {
      if (!(c.identity_decided && c.identity_holds)) ++bad;
      collisions.push_back({{"oracle", i}, {"n", c.n}, {"e", c.e}, {"value", to_json(c.value)},
                            {"identity_holds", c.identity_holds}, {"identity_decided", c.identity_decided}});
    }
  }
  run.results["collisions"] = collisions;
  run.check("bound", over == 0, {{"violations", over}});
  run.check("contrapositive", bad == 0, {{"collisions", collisions.size()}, {"unexplained", bad}});
}

void io_match(const Options& o, Run& run) {
  std::vector<Natural> table;
  for (std::uint64_t x = 0; x < o.horizon; ++x) table.push_back(seeded_hash(o.seed, x) % o.values);
  auto psi = encode_program(table_scan_program(table));
  auto zero = FunctionOracle([](const Natural&) { return Natural(0); });
  auto probe = io_match_construct(table, psi, zero, o.horizon, o.step_cap);
  std::vector<std::uint64_t> g;
  for (const auto& st : probe.stages) {
    if (!st.g) throw UsageError("step cap too small for the table scan");
    g.push_back(*st.g);
  }
  if (g.empty()) throw UsageError("match needs horizon >= 1");
  const auto seed = o.seed;
  FunctionOracle h_esc([g, seed](const Natural& n) {
    auto k = n.convert_to<std::size_t>();
    return Natural((k < g.size() ? g[k] : g.back()) + seeded_hash(seed ^ 0x6b6d73, n) % 5);
  });
  auto trace = io_match_construct(table, psi, h_esc, o.horizon + 2, o.step_cap);
  json f = json::array(), stages = json::array();
  for (const auto& v : table) f.push_back(to_json(v));
  for (const auto& st : trace.stages) {
    json s = {{"n", st.n}, {"h_esc", st.h_esc}, {"added", st.added}, {"pad", st.pad},
              {"domain_size", st.domain_size}, {"matches", st.matches}};
    s["g"] = st.g ? json(*st.g) : json(nullptr);
    stages.push_back(s);
  }
  run.results["f"] = f;
  run.results["stages"] = stages;
  auto v = match_violations(trace);
  json vs = json::array();
  for (const auto& x : v)
    vs.push_back({{"n", x.n}, {"domain_not_growing", x.domain_not_growing}, {"too_few_matches", x.too_few_matches}});
  run.check("match_invariants", v.empty(), {{"violations", vs}});
}

void forcing(const Options& o, const std::string& h, const std::string& g, Run& run) {
  forcing::ForcingConfig cfg;
  cfg.h = parse_order(h);
  cfg.g = parse_order(g);
  cfg.stages = o.stages;
  cfg.oracle_budget = o.oracle_budget;
  cfg.use_depth = o.use_depth;
  cfg.universe_cap = o.universe_cap;
  cfg.pi_cap = o.pi_cap;
  cfg.max_g_value = o.max_g;
  for (const auto& m : o.machines) cfg.machines.push_back(parse_program_ref(m));
  auto t = forcing::forcing_run(cfg);
  json stages = json::array();
  for (const auto& st : t.stages) {
    json s = {{"stage", st.stage}, {"e", st.e}, {"k", st.k}, {"branch", st.branch},
              {"sigma", st.sigma}, {"condition", st.condition}, {"x", st.x}, {"components", st.components},
              {"bad_set_size", st.bad_set_size}, {"certificate_ok", st.certificate_ok},
              {"certificate", {{"small", st.certificate.small}, {"parameter", st.certificate.parameter},
                               {"depth", st.certificate.depth}, {"unmarked", st.certificate.unmarked},
                               {"digest", st.certificate.digest}}}};
    s["value"] = st.value ? to_json(*st.value) : json(nullptr);
    stages.push_back(s);
  }
  run.results["stages"] = stages;
  if (t.aborted) run.results["aborted"] = *t.aborted;
  auto c = forcing::verify_transcript(cfg, t);
  run.results["problems"] = c.problems;
  run.check("completed", !t.aborted.has_value());
  run.check("extension_chain", c.extension_chain);
  run.check("monotone_bad_sets", c.monotone_bad_sets);
  run.check("certified_smallness", c.certified_smallness);
  run.check("within_alphabet", c.within_alphabet);
}

void run_reduction(Options& o, json& config, Run& run) {
  if (o.theorem == "1") {
    if (o.h.empty()) o.h = "linear:1,2";
    config["h"] = o.h;
    given_h(o, parse_order(o.h), run);
  } else if (o.theorem == "2") {
    if (o.g.empty()) o.g = "const:3";
    config["g"] = o.g;
    given_g(o, parse_order(o.g), run);
  } else if (o.theorem == "match" || o.theorem == "kms") {
    io_match(o, run);
  } else if (o.theorem == "forcing") {
    if (o.h.empty()) o.h = "linear:2,2";
    if (o.g.empty()) o.g = "2";
    config["h"] = o.h;
    config["g"] = o.g;
    forcing(o, o.h, o.g, run);
  } else {
    throw UsageError("--theorem must be 1, 2, match (alias kms) or forcing");
  }
}

// --- numberings --------------------------------------------------------------

json entry_rows(const Numbering& d, const OrderFunction& h, std::uint64_t horizon) {
  json rows = json::array();
  for (std::uint64_t e = 0; e <= horizon; ++e) {
    auto s = d.entries(e);
    auto c = d.card(e);
    rows.push_back({{"e", e}, {"set", s ? json(*s) : json(nullptr)}, {"card", c ? json(*c) : json(nullptr)},
                    {"h", to_json(h(e))}});
  }
  return rows;
}

void check_cards(const Numbering& d, std::uint64_t horizon, Run& run) {
  auto bad = card_mismatches(d, horizon);
  run.check("card_consistent", bad.empty(), {{"mismatches", bad}});
}

void build_numbering(Options& o, json& config, Run& run) {
  if (o.h.empty()) o.h = "2";
  config["h"] = o.h;
  auto h = parse_order(o.h);
  if (o.kind == "ci") {
    auto r = parse_set(o.r);
    auto d = usage_guard("defeat", [&] { return defeat_ci_numbering(r, h, o.horizon, o.search_cap); });
    run.results["entries"] = entry_rows(d, h, o.horizon);
    check_cards(d, o.horizon, run);
    auto rep = ci_violations(r, h, d, o.horizon);
    std::vector<std::uint64_t> missed;
    for (std::uint64_t e = 0; e <= o.horizon; e += 2)
      if (!std::binary_search(rep.violations.begin(), rep.violations.end(), e)) missed.push_back(e);
    run.check("defeats_even_indices", missed.empty(), {{"missed", missed}});
  } else if (o.kind == "ei") {
    if (o.g.empty()) o.g = "linear:1,1";
    config["g"] = o.g;
    auto g = as_oracle(parse_order(o.g));
    auto ei = ei_witness_numbering(h, g, o.horizon);
    run.results["entries"] = entry_rows(ei.numbering, ei.bound, o.horizon);
    json pairs = json::array();
    std::vector<std::uint64_t> law_failures;
    for (std::uint64_t k = 0; 2 * k <= o.horizon; ++k) {
      const auto [e, d] = ei.pairs.at(k);
      pairs.push_back({{"index", 2 * k}, {"e", e}, {"d", d}});
      auto entry = *ei.numbering.entries(2 * k);
      auto w = we_enumerate(ProgramIndex{e}, clamp_u64(g(d)));
      const auto want = std::min<std::uint64_t>(clamp_u64(h(d)) + 1, w.size());
      bool inside = std::all_of(entry.begin(), entry.end(),
                                [&](auto x) { return std::find(w.begin(), w.end(), x) != w.end(); });
      if (entry.size() != want || !inside) law_failures.push_back(2 * k);
    }
    run.results["pairs"] = pairs;
    run.results["domain_order"] = "increasing Cantor code <e,d> over d <= e <= g(d)";
    check_cards(ei.numbering, o.horizon, run);
    run.check("size_law", law_failures.empty(), {{"failures", law_failures}});
  } else if (o.kind == "pandemic") {
    if (o.family.empty()) throw UsageError("--kind pandemic needs --family");
    auto fam = load_family(o.family);
    auto f = parse_order(o.f);
    std::vector<ProgramIndex> idx;
    json members = json::array();
    for (const auto& m : fam) {
      idx.push_back(m.index);
      members.push_back({{"path", m.path}, {"role", m.role}, {"index", m.index.value.str()}});
    }
    run.results["family"] = members;
    run.results["search"] = "per-element budget f(e), x < f(e)";
    auto p = build_pandemic_numbering(as_oracle(f), h, idx);
    std::vector<FullEntryTimes> times;
    for (const auto& k : idx) times.emplace_back(k, o.measure_cap);
    json rows = json::array(), tmatrix = json::array();
    std::uint64_t frontier_failures = 0, undetermined = 0;
    for (std::uint64_t e = 0; e <= o.horizon; ++e) {
      json trow = json::array();
      for (std::uint64_t k = 0; k < idx.size(); ++k) {
        const auto want = clamp_u64(h(pair(e, k)));
        const auto fe = clamp_u64(f(e));
        auto entry = p.entry(e, k);
        auto t = times[k].time_for(want);
        trow.push_back(t ? json(*t) : json(nullptr));
        rows.push_back({{"e", e}, {"k", k}, {"index", to_json(pair(e, k))}, {"set", entry}, {"want", want}});
        if (!t) {
          ++undetermined;
        } else if ((entry.size() == want) != (fe >= *t)) {
          ++frontier_failures;
        }
      }
      tmatrix.push_back(trow);
    }
    run.results["entries"] = rows;
    run.results["t"] = tmatrix;
    run.check("full_entry_frontier", frontier_failures == 0,
              {{"failures", frontier_failures}, {"undetermined", undetermined}});
  } else {
    throw UsageError("--kind must be ci, ei or pandemic");
  }
}

void check_immunity(Options& o, json& config, Run& run) {
  if (o.numbering.empty()) throw UsageError("--numbering is required");
  if (o.h.empty()) o.h = "2";
  config["h"] = o.h;
  auto nf = load_numbering(o.numbering);
  auto h = parse_order(o.h);
  auto r = parse_set(o.r);
  run.results["numbering"] = nf.echo;
  run.results["entries"] = entry_rows(nf.numbering, h, o.horizon);
  check_cards(nf.numbering, o.horizon, run);
  auto rep = ci_violations(r, h, nf.numbering, o.horizon);
  run.results["undetermined"] = rep.undetermined;
  run.check("canonically_immune", rep.violations.empty(), {{"violations", rep.violations}});
  json layers = json::array();
  bool all_hold = true;
  for (std::uint64_t c = 1; c <= o.cmax; ++c) {
    auto l = schnorr_layer(nf.numbering, c, o.horizon);
    all_hold = all_hold && l.holds();
    layers.push_back({{"c", c}, {"conditions", l.conditions}, {"measure_bound", l.measure_bound.str()},
                      {"limit", l.limit.str()}, {"holds", l.holds()}});
  }
  run.results["schnorr_layers"] = layers;
  run.check("schnorr_bound", all_hold);
}

void check_pandemic(Options& o, json& config, Run& run) {
  if (o.numbering.empty()) throw UsageError("--numbering is required");
  if (o.h.empty()) o.h = "linear:1,2";
  config["h"] = o.h;
  auto nf = load_numbering(o.numbering);
  auto h = parse_order(o.h);
  BoundedNumbering::Bound b;
  if (!o.bound.empty()) {
    auto spec = parse_order(o.bound);
    b = [spec](std::uint64_t e) { return clamp_u64(spec(e)); };
  } else if (nf.table) {
    auto table = std::make_shared<const std::vector<FiniteSet>>(*nf.table);
    b = [table](std::uint64_t e) -> std::uint64_t {
      return e < table->size() && !(*table)[e].empty() ? (*table)[e].back() : 0;
    };
    config["bound"] = "table maximum";
  } else {
    throw UsageError("a program numbering needs an explicit --bound");
  }
  BoundedNumbering d(nf.numbering, b);
  auto ps = defeat_pandemic_set(d, h, o.horizon);
  run.results["numbering"] = nf.echo;
  run.results["pandemic_set"] = {{"elements", ps.elements}, {"stages", ps.stages}, {"stem", ps.stem},
                                 {"decided_up_to", ps.decided_up_to}};
  if (ps.cutoff) run.results["pandemic_set"]["cutoff"] = *ps.cutoff;
  auto rep = endemic_check(nf.numbering, h, ps.predicate, o.horizon);
  json ws = json::array();
  std::uint64_t above = 0;
  for (const auto& w : rep.witnesses) {
    ws.push_back({{"e", w.e}, {"set", w.set}, {"card", w.size}, {"h", to_json(h(w.e))}});
    if (w.e >= ps.stem) ++above;
  }
  run.results["witnesses"] = ws;
  run.results["undetermined"] = rep.undetermined;
  run.check("no_endemic_witness", above == 0, {{"witnesses_above_stem", above}});
  if (config.contains("r_given") && config["r_given"] == true) {
    auto r = parse_set(o.r);
    auto other = endemic_check(nf.numbering, h, r, o.horizon);
    json ow = json::array();
    for (const auto& w : other.witnesses) ow.push_back({{"e", w.e}, {"set", w.set}, {"card", w.size}});
    run.results["endemic_to_r"] = {{"witnesses", ow}, {"undetermined", other.undetermined}};
    run.check("endemic_to_r", ow.size() >= o.min_witnesses,
              {{"witnesses", ow.size()}, {"required", o.min_witnesses},
               {"largest", ow.empty() ? json(nullptr) : ow.back()["e"]}});
  }
}

void simulate_forcing(Options& o, json& config, Run& run) {
  if (o.h.empty()) o.h = "linear:2,2";
  if (o.g.empty()) o.g = "2";
  config["h"] = o.h;
  config["g"] = o.g;
  forcing(o, o.h, o.g, run);
}

void eval_program(const Options& o, Run& run) {
  if (o.program.empty()) throw UsageError("--program is required");
  auto e = parse_program_ref(o.program);
  std::vector<Natural> args, tau;
  usage_guard("arguments", [&] {
    for (const auto& a : o.args) args.push_back(parse_natural(a));
    for (const auto& v : o.oracle) tau.push_back(parse_natural(v));
    return 0;
  });
  auto r = eval(e, std::span<const Natural>(args), o.budget, tau.empty() ? Oracle::none() : Oracle::string(tau));
  run.results["index"] = e.value.str();
  run.results["status"] = r.halted() ? "halted" : "exhausted";
  run.results["value"] = r.halted() ? to_json(r.value) : json(nullptr);
  run.results["steps"] = r.steps_used;
  if (!o.expect.empty()) {
    auto want = usage_guard("--expect", [&] { return parse_natural(o.expect); });
    run.check("expected_value", r.halted() && r.value == want);
  }
}

// Splices a key = value config file into argv as --key value pairs, right
// after the subcommand so that explicit flags still win.
std::vector<std::string> expand_config(std::vector<std::string> argv, const std::set<std::string>& commands) {
  std::string config;
  for (std::size_t i = 1; i < argv.size(); ++i) {
    if (argv[i] == "--config") {
      if (i + 1 >= argv.size()) throw UsageError("--config needs a file");
      config = argv[i + 1];
      argv.erase(argv.begin() + i, argv.begin() + i + 2);
      break;
    }
    if (argv[i].rfind("--config=", 0) == 0) {
      config = argv[i].substr(9);
      argv.erase(argv.begin() + i);
      break;
    }
  }
  if (config.empty()) return argv;
  auto pairs = parse_config(read_file(config), config);
  auto sub = std::find_if(argv.begin() + 1, argv.end(), [&](const auto& a) { return commands.count(a) > 0; });
  // File values in a config are relative to the config file.
  const std::set<std::string> path_keys{"numbering", "family", "program", "machine"};
  const auto dir = std::filesystem::path(config).parent_path();
  auto rebase = [&dir](const std::string& v) {
    std::string out;
    for (const auto& part : split(v, ',')) {
      std::filesystem::path p(part);
      if (!out.empty()) out += ',';
      out += all_digits(part) || p.is_absolute() || dir.empty() ? part : (dir / p).string();
    }
    return out;
  };
  std::vector<std::string> extra;
  std::string command;
  for (const auto& [k, v] : pairs) {
    if (k == "command") {
      command = v;
      continue;
    }
    extra.push_back("--" + k);
    extra.push_back(path_keys.count(k) ? rebase(v) : v);
  }
  if (sub == argv.end()) {
    if (command.empty()) throw UsageError(config + ": no command given");
    if (!commands.count(command)) throw UsageError(config + ": unknown command '" + command + "'");
    argv.push_back(command);
    sub = argv.end() - 1;
  } else if (!command.empty() && command != *sub) {
    throw UsageError(config + ": command '" + command + "' conflicts with '" + *sub + "'");
  }
  argv.insert(sub + 1, extra.begin(), extra.end());
  return argv;
}

json echo_options(const CLI::App* sub) {
  json out = json::object();
  for (const auto* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
    const auto& name = opt->get_lnames()[0];
    if (opt->count() > 0) {
      auto res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      out[name] = joined;
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Bounded-DNR / SNPR workbench"};
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", SNRKIT_VERSION);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--output,-o", o.output, "report path (default: stdout)");

  auto horizon = [&](CLI::App* s, std::uint64_t def) { return s->add_option("--horizon", o.horizon)->default_val(def); };

  auto* vl = app.add_subcommand("verify-lemmas", "exhaustive / randomized bushy-tree lemma checks");
  vl->add_option("--alphabet", o.alphabet, "alphabet bound h (N or bound spec)");
  vl->add_option("--maxlen", o.maxlen);
  vl->add_option("--nmax", o.nmax);
  vl->add_option("--mmax", o.mmax);
  vl->add_option("--random-trials", o.random_trials);
  vl->add_option("--seed", o.seed);
  vl->add_option("--union-cap", o.union_cap, "largest universe for the exhaustive union check");
  vl->add_option("--closure-cap", o.closure_cap, "largest universe for the exhaustive closure check");

  auto add_forcing = [&](CLI::App* s) {
    s->add_option("--stages", o.stages);
    s->add_option("--oracle-budget", o.oracle_budget);
    s->add_option("--use-depth", o.use_depth);
    s->add_option("--universe-cap", o.universe_cap);
    s->add_option("--pi-cap", o.pi_cap);
    s->add_option("--max-g", o.max_g);
    s->add_option("--machine", o.machines, "Phi_e programs (index or .urm), cycled")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  };

  auto* rr = app.add_subcommand("run-reduction", "run a reduction against seeded oracles");
  rr->add_option("--theorem", o.theorem, "1 | 2 | match | forcing")->required();
  rr->add_option("--h", o.h, "bound spec (--theorem 1, forcing)");
  rr->add_option("--g", o.g, "bound spec (--theorem 2, forcing)");
  horizon(rr, 8);
  rr->add_option("--seed", o.seed);
  rr->add_option("--oracles", o.oracles, "number of seeded oracles");
  rr->add_option("--budget", o.budget, "step budget for phi_e runs");
  rr->add_option("--check-budget", o.check_budget, "budget the DNR oracles use to dodge phi_i(i)");
  rr->add_option("--values", o.values, "match: table values are < this");
  rr->add_option("--step-cap", o.step_cap, "match: stage and scan cap");
  add_forcing(rr);

  auto* bn = app.add_subcommand("build-numbering", "build a defeating / witness / pandemic numbering");
  bn->add_option("--kind", o.kind, "ci | ei | pandemic")->required();
  bn->add_option("--h", o.h);
  bn->add_option("--g", o.g, "ei: enumeration stage bound");
  bn->add_option("--r", o.r, "ci: set spec");
  bn->add_option("--f", o.f, "pandemic: search-time function");
  bn->add_option("--family", o.family, "pandemic: family file");
  bn->add_option("--measure-cap", o.measure_cap);
  bn->add_option("--search-cap", o.search_cap);
  horizon(bn, 40);

  auto* ci = app.add_subcommand("check-immunity", "canonical immunity and Schnorr layers of a numbering");
  ci->add_option("--numbering", o.numbering)->required();
  ci->add_option("--r", o.r);
  ci->add_option("--h", o.h);
  ci->add_option("--cmax", o.cmax);
  horizon(ci, 40);

  auto* cp = app.add_subcommand("check-pandemic", "defeat a bounded numbering with a sparse set");
  cp->add_option("--numbering", o.numbering)->required();
  cp->add_option("--bound", o.bound, "b(e) >= max D_e (required for program numberings)");
  cp->add_option("--h", o.h);
  auto* ropt = cp->add_option("--r", o.r, "also report witnesses against this set");
  cp->add_option("--min-witnesses", o.min_witnesses);
  horizon(cp, 40);

  auto* sf = app.add_subcommand("simulate-forcing", "bushy-tree forcing run with certificates");
  sf->add_option("--h", o.h);
  sf->add_option("--g", o.g);
  add_forcing(sf);

  auto* ev = app.add_subcommand("eval", "run one program");
  ev->add_option("--program", o.program, "index or .urm path")->required();
  ev->add_option("--args", o.args)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ev->add_option("--budget", o.budget);
  ev->add_option("--oracle", o.oracle, "oracle string values")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ev->add_option("--expect", o.expect);

  std::set<std::string> commands;
  for (const auto* s : app.get_subcommands({})) commands.insert(s->get_name());

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args, commands);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "snrkit: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  json config = echo_options(sub);
  if (sub == cp) config["r_given"] = ropt->count() > 0;
  Run run;
  try {
    if (sub == vl) verify_lemmas(o, run);
    else if (sub == rr) run_reduction(o, config, run);
    else if (sub == bn) build_numbering(o, config, run);
    else if (sub == ci) check_immunity(o, config, run);
    else if (sub == cp) check_pandemic(o, config, run);
    else if (sub == sf) simulate_forcing(o, config, run);
    else eval_program(o, run);
  } catch (const UsageError& e) {
    std::cerr << "snrkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "snrkit: internal error: " << e.what() << "\n";
    return 3;
  }

  json report = {{"tool", "snrkit"}, {"version", SNRKIT_VERSION}, {"command", sub->get_name()},
                 {"config", config},  {"passed", !run.failed()},   {"checks", run.checks},
                 {"results", run.results}};
  const std::string text = "# snrkit report " + utc_timestamp() + "\n" + report.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out || !(out << text)) {
      std::cerr << "snrkit: cannot write '" << o.output << "'\n";
      return 3;
    }
  }
  return run.failed() ? 1 : 0;
}
