// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance <snrkit-cli> <samples-dir>

#include "bushy_oracle.hpp"

#include "snrkit/bushy.hpp"
#include "snrkit/forcing.hpp"
#include "snrkit/immunity.hpp"
#include "snrkit/io_match.hpp"
#include "snrkit/pandemic.hpp"
#include "snrkit/programs.hpp"
#include "snrkit/recursion.hpp"
#include "snrkit/reductions.hpp"
#include "snrkit/specialize.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace snr;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

template <typename F>
void criterion(int id, const char* title, F&& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& ex) {
    o.pass = false;
    o.note << "exception: " << ex.what() << "; ";
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s (%s%.1fs)\n", id, o.pass ? "PASS" : "FAIL", title, o.note.str().c_str(), secs);
  std::fflush(stdout);
}

// 1 ---------------------------------------------------------------------------

void bushy_lemmas(Outcome& o) {
  bushy::Alphabet two(OrderFunction::constant(2)), three(OrderFunction::constant(3));
  std::uint64_t checked = 0;
  for (auto r : {bushy::verify_smallness_union(two, 2, 3, 3), bushy::verify_closure(two, 2, 3),
                 bushy::verify_smallness_union_random(three, 3, 3, 3, 1000, 20240101),
                 bushy::verify_closure_random(three, 3, 3, 1000, 20240102)}) {
    o.require(!r.refused, r.lemma + " refused");
    o.require(r.passed(), r.lemma + " counterexample " + r.counterexample.value_or(""));
    checked += r.checked;
  }
  o.note << "union pairs 4^7 exhaustive + 10^3 random at h=3, L=3; " << checked << " node checks; ";
}

// 2 ---------------------------------------------------------------------------

void bigness_equivalence(Outcome& o) {
  const std::vector<std::vector<std::uint32_t>> shapes{{14}, {2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4},
                                                       {4, 2}, {2, 2, 2}, {6, 1}, {1, 3, 3}};
  std::uint64_t instances = 0, disagreements = 0;
  for (const auto& widths : shapes) {
    auto tiny = snr::testing::tiny_universe(widths);
    const std::size_t N = tiny.strings.size();
    o.require(N <= 15, "universe too large");
    std::vector<Natural> tbl(widths.begin(), widths.end());
    bushy::Alphabet h(OrderFunction::table(tbl));
    constexpr unsigned kN = 4;
    auto oracle = snr::testing::brute_force_bigness(tiny, kN);
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
      bushy::StringSet b;
      for (std::size_t i = 0; i < N; ++i)
        if ((mask >> i) & 1u) b.insert(tiny.strings[i]);
      for (std::size_t s = 0; s < N; ++s) {
        for (unsigned n = 1; n <= kN; ++n) {
          ++instances;
          if (bushy::big_decision(b, n, tiny.strings[s], h).big != oracle[n][s][mask]) ++disagreements;
        }
      }
    }
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.note << instances << " (B, n, sigma) instances over 10 universes of <= 15 strings; ";
}

// 3 ---------------------------------------------------------------------------

void machine_laws(Outcome& o) {
  for (std::uint64_t z = 0; z <= 10000; ++z) {
    auto [x, y] = unpair(z);
    o.require(pair(x, y) == z, "pair(unpair(z)) at " + std::to_string(z));
  }
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t m = 0; m <= 1000; ++m)
      o.require(tuple_encode(n, tuple_decode(n, m)) == m, "tuple round trip");
  for (std::uint64_t e = 0; e <= 10000; ++e)
    o.require(encode_program(decode_program(ProgramIndex{e})).value == e, "numbering round trip");

  std::vector<ProgramIndex> corpus{encode_program(programs::add()), encode_program(programs::successor()),
                                   encode_program(programs::first_argument()),
                                   encode_program(programs::halt_on_evens()),
                                   encode_program(programs::universal_transpose())};
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) corpus.push_back(ProgramIndex{rng() % 50000});
  std::size_t triples = 0;
  for (const auto& e : corpus) {
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<Natural> fixed(rng() % 4), rest(rng() % 4);
      for (auto& v : fixed) v = rng() % 10;
      for (auto& v : rest) v = rng() % 10;
      auto all = fixed;
      all.insert(all.end(), rest.begin(), rest.end());
      auto direct = eval(e, all, 3000);
      auto special = eval(smn(e, fixed), rest, 3000 + kSmnPrefix);
      ++triples;
      o.require(direct.halted() == special.halted() && (!direct.halted() || direct.value == special.value),
                "smn law at e=" + e.value.str());
    }
  }
  auto q = fix(constant_index_transformer());
  auto r = eval(q, {}, 100000);
  o.require(r.halted() && r.value == q.value, "quine");
  o.note << "pairing z<=10^4, tuples n<=4 m<=10^3, numbering e<=10^4, " << triples << " smn triples, quine; ";
}

// 4 ---------------------------------------------------------------------------

void avoid_multiple_check(Outcome& o) {
  const std::uint64_t budget = 10000, oracles = 1000;
  std::uint64_t applications = 0, failures_seen = 0;
  for (std::uint64_t a : {2, 3}) {
    for (std::uint64_t c : {2, 3}) {
      AvoidMultiple am(a, c);
      const Natural bound = am.output_bound();
      for (std::uint64_t t = 0; t < oracles; ++t) {
        auto f = random_dnr_oracle(seeded_hash(a * 10 + c, t), [a](const Natural&) { return Natural(a); },
                                   budget + am.overhead_steps());
        for (std::uint64_t e = 0; e <= 50; ++e) {
          ++applications;
          failures_seen += avoidance_failures(am, f, e, budget).size();
          o.require(am.apply(f, e) < bound, "output bound");
        }
      }
    }
  }
  o.require(failures_seen == 0, std::to_string(failures_seen) + " avoidance failures");
  o.note << applications << " applications, a,c in {2,3}, 10^3 oracles each, e<=50, budget 10^4; ";
}

// 5 ---------------------------------------------------------------------------

void given_g_check(Outcome& o) {
  std::uint64_t collisions = 0, oracles = 0;
  for (auto g : {OrderFunction::constant(3), OrderFunction::constant(5)}) {
    auto red = dnr_to_snpr_given_g(g, 8);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      ++oracles;
      auto f = random_bounded_oracle(seeded_hash(77, seed) ^ g(0).convert_to<std::uint64_t>(), g);
      for (std::uint64_t n = 0; n <= 8; ++n) o.require(red.j.apply(f, n) <= red.h(n), "j(n) <= h(n)");
      for (const auto& c : snpr_collisions(red, f, 8, 10000)) {
        ++collisions;
        o.require(c.identity_decided && c.identity_holds, "collision without identity");
      }
    }
  }
  o.note << oracles << " oracles (g = 3, 5), n <= 8, " << collisions << " collisions all explained; ";
}

// 6 ---------------------------------------------------------------------------

void given_h_check(Outcome& o) {
  const std::uint64_t budget = 10000;
  std::uint64_t points = 0;
  for (auto [h, horizon] : {std::pair{OrderFunction::linear(1, 2), std::uint64_t{40}},
                            std::pair{OrderFunction::linear(2, 2), std::uint64_t{60}},
                            std::pair{OrderFunction::linear(3, 2), std::uint64_t{100}}}) {
    auto red = dnr_to_snpr_given_h(h, horizon);
    o.require(order_validate(red.g, 4 * horizon).ok, "g is not an order function");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto f = random_dnr_oracle(seeded_hash(5, seed), red.g, budget + 2000);
      for (const auto& iv : red.intervals) {
        for (std::uint64_t x = iv.lo; x <= iv.hi; ++x) {
          ++points;
          const Natural fx = red.F.apply(f, x);
          o.require(fx < h(x), "F(x) < h(x)");
          for (std::uint64_t e = 0; e < iv.n; ++e) {
            auto r = memo_eval(e, x, budget);
            o.require(!(r.halted() && r.value == fx), "collision e=" + std::to_string(e) + " x=" + std::to_string(x));
          }
        }
      }
    }
  }
  o.note << points << " interval points over 3 order functions x 10 oracles; ";
}

// 7 ---------------------------------------------------------------------------

void match_check(Outcome& o) {
  std::uint64_t stages = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t size = 6 + seed;
    std::vector<Natural> table;
    for (std::size_t x = 0; x < size; ++x) table.push_back(seeded_hash(seed, x) % 7);
    auto psi = encode_program(table_scan_program(table));
    auto probe = io_match_construct(table, psi, FunctionOracle([](const Natural&) { return Natural(0); }), size, 1000);
    std::vector<std::uint64_t> g;
    for (const auto& st : probe.stages) g.push_back(st.g.value());
    FunctionOracle h_esc([g, seed](const Natural& n) {
      auto k = n.convert_to<std::size_t>();
      return Natural((k < g.size() ? g[k] : g.back()) + seeded_hash(seed + 100, n) % 4);
    });
    auto trace = io_match_construct(table, psi, h_esc, size + 3, 1000);
    stages += trace.stages.size();
    o.require(match_violations(trace).empty(), "match violation");
    for (std::size_t i = 1; i < trace.stages.size(); ++i)
      o.require(trace.stages[i].domain_size > trace.stages[i - 1].domain_size, "domain not increasing");
  }
  o.note << stages << " stages over 12 tables, hEsc >= g; ";
}

// 8 ---------------------------------------------------------------------------

void forcing_check(Outcome& o) {
  forcing::ForcingConfig cfg;
  cfg.h = OrderFunction::linear(2, 2);
  cfg.stages = 6;
  auto t = forcing::forcing_run(cfg);
  o.require(!t.aborted, "run aborted: " + t.aborted.value_or(""));
  o.require(t.stages.size() == 6, "stage count");
  for (const auto& st : t.stages) {
    o.require(st.certificate.small && st.certificate_ok, "stage " + std::to_string(st.stage) + " certificate");
    o.require(st.certificate.parameter == clamp_u64(cfg.h(st.condition.size())), "certificate parameter");
  }
  auto check = forcing::verify_transcript(cfg, t);
  o.require(check.ok(), "verify_transcript");
  o.note << "6 stages, condition length " << (t.stages.empty() ? 0 : t.stages.back().condition.size())
         << ", post-hoc re-verification clean; ";
}

// 9 ---------------------------------------------------------------------------

void immunity_check(Outcome& o) {
  for (auto [r, h] : {std::pair{SetPredicate::evens(), OrderFunction::constant(2)},
                      std::pair{SetPredicate::program(encode_program(programs::evens_decider()), 10000),
                                OrderFunction::log2(2)},
                      std::pair{SetPredicate::multiples(3), OrderFunction::linear(1, 2)}}) {
    auto d = defeat_ci_numbering(r, h, 200);
    auto rep = ci_violations(r, h, d, 200);
    for (std::uint64_t e = 0; e <= 200; e += 2)
      o.require(std::binary_search(rep.violations.begin(), rep.violations.end(), e), "ci at " + std::to_string(e));
    o.require(card_mismatches(d, 200).empty(), "card");
  }

  std::mt19937_64 rng(2025);
  for (int t = 0; t < 50; ++t) {
    std::vector<FiniteSet> table;
    for (std::uint64_t e = 0; e <= 60; ++e) {
      FiniteSet s;
      for (std::uint64_t x = 0; x < 3 * e + 2; ++x)
        if (rng() % 3) s.push_back(x);
      table.push_back(s);
    }
    auto d = Numbering::from_table("corpus", table);
    for (std::uint64_t c = 1; c <= 8; ++c) o.require(schnorr_layer(d, c, 60).holds(), "schnorr layer");
  }

  for (int t = 0; t < 20; ++t) {
    const std::uint64_t E = 80;
    std::vector<FiniteSet> table;
    std::vector<std::uint64_t> bounds;
    for (std::uint64_t e = 0; e <= E; ++e) {
      const std::uint64_t b = 1 + rng() % (4 * e + 5);
      FiniteSet s;
      for (std::uint64_t x = 0; x <= b; ++x)
        if (rng() % 2) s.push_back(x);
      table.push_back(s);
      bounds.push_back(b);
    }
    BoundedNumbering d(Numbering::from_table("corpus", table), [bounds](std::uint64_t e) { return bounds[e]; });
    auto h = t % 2 ? OrderFunction::log2(2 + t % 3) : OrderFunction::linear(1, 2);
    auto ps = defeat_pandemic_set(d, h, E);
    for (std::size_t i = 1; i < ps.elements.size(); ++i) o.require(ps.elements[i - 1] < ps.elements[i], "increasing");
    auto rep = endemic_check(d.numbering(), h, ps.predicate, E);
    for (const auto& w : rep.witnesses) o.require(w.e < ps.stem, "endemic witness at " + std::to_string(w.e));
    o.require(rep.undetermined.empty(), "undetermined pandemic membership");
  }

  std::vector<ProgramIndex> fam{encode_program(programs::evens_decider()),
                                encode_program(programs::slow_evens_decider(3)),
                                encode_program(programs::slow_evens_decider(7))};
  std::vector<FullEntryTimes> times;
  for (const auto& k : fam) times.emplace_back(k, 600);
  std::uint64_t frontier_points = 0;
  for (auto h : {OrderFunction::constant(3), OrderFunction::constant(5)}) {
    for (std::uint64_t fv = 0; fv <= 400; fv += 7) {
      auto p = build_pandemic_numbering(FunctionOracle([fv](const Natural&) { return Natural(fv); }), h, fam);
      for (std::uint64_t e = 0; e < 3; ++e) {
        for (std::uint64_t k = 0; k < fam.size(); ++k) {
          const auto want = clamp_u64(h(pair(e, k)));
          auto t = times[k].time_for(want);
          o.require(t.has_value(), "t_k(e) beyond measure cap");
          auto entry = p.entry(e, k);
          ++frontier_points;
          o.require((entry.size() == want) == (fv >= *t), "frontier at k=" + std::to_string(k));
          for (auto x : entry) o.require(x % 2 == 0, "entry outside R_k");
        }
      }
    }
  }
  o.note << "ci even e<=200 x3, schnorr 50 numberings, pandemic 20 instances, " << frontier_points
         << " frontier points; ";
}

// 10 --------------------------------------------------------------------------

std::string report_body(const std::string& path) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism_check(Outcome& o, const std::string& cli, const std::string& samples) {
  if (cli.empty() || samples.empty()) {
    o.require(false, "usage: acceptance <snrkit-cli> <samples-dir>");
    return;
  }
  namespace fs = std::filesystem;
  auto tmp = fs::temp_directory_path() / ("snrkit_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  std::vector<std::string> runs;
  for (const auto& entry : fs::directory_iterator(samples))
    if (entry.path().extension() == ".cfg" && entry.path().stem() != "malformed")
      runs.push_back("--config '" + entry.path().string() + "'");
  std::sort(runs.begin(), runs.end());
  runs.push_back("verify-lemmas --alphabet 3 --maxlen 3 --random-trials 200 --seed 11");
  runs.push_back("run-reduction --theorem 2 --g const:4 --horizon 6 --oracles 30 --seed 9");
  runs.push_back("run-reduction --theorem match --horizon 12 --seed 4");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string a = (tmp / "a.json").string(), b = (tmp / "b.json").string();
    int ra = std::system((cli + " " + runs[i] + " --output " + a + " >/dev/null 2>&1").c_str());
    int rb = std::system((cli + " " + runs[i] + " --output " + b + " >/dev/null 2>&1").c_str());
    o.require(ra == 0 && rb == 0, "run failed: " + runs[i]);
    auto body = report_body(a);
    o.require(!body.empty() && body == report_body(b), "body differs: " + runs[i]);
  }
  fs::remove_all(tmp);
  o.note << runs.size() << " CLI runs repeated, bodies byte-identical; ";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string samples = argc > 2 ? argv[2] : "";
  criterion(1, "bushy lemma exhaustion", bushy_lemmas);
  criterion(2, "bigness oracle equivalence", bigness_equivalence);
  criterion(3, "machine-core laws", machine_laws);
  criterion(4, "avoid_multiple", avoid_multiple_check);
  criterion(5, "DNR to SNPR given g", given_g_check);
  criterion(6, "DNR to SNPR given h", given_h_check);
  criterion(7, "eventual-match construction", match_check);
  criterion(8, "forcing simulation", forcing_check);
  criterion(9, "immunity/pandemic constructions", immunity_check);
  criterion(10, "determinism", [&](Outcome& o) { determinism_check(o, cli, samples); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
