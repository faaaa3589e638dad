#include <doctest.h>

#include "pisym/parser.hpp"
#include "pisym/problems.hpp"
#include "pisym/records.hpp"
#include "pisym/syntax.hpp"
#include "support/gen.hpp"

using namespace pisym;

namespace {

const Fixture& fixture(const std::vector<Fixture>& all, const std::string& name) {
  for (const auto& f : all)
    if (f.name == name) return f;
  throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("leader election") {
  const auto all = fixtures();
  const auto& el = fixture(all, "election");
  CHECK(solves_leader_election(el.net.state(), LeaderElectionSpec::indexed("out"), 512)
            .outcome == Outcome::Holds);
  const auto& ls = fixture(all, "leader-slave");
  CHECK(solves_leader_election(ls.net.state(),
                               LeaderElectionSpec::leader_slave("leader", "slave"), 512)
            .outcome == Outcome::Holds);

  const NetState nil = as_network(parse("0 | 0"));
  CHECK(solves_leader_election(nil, LeaderElectionSpec::indexed("out"), 8).outcome ==
        Outcome::Fails);
  CHECK(solves_leader_election(nil, LeaderElectionSpec::leader_slave("leader", "slave"), 8)
            .outcome == Outcome::Fails);

  // Both copies can win.
  const Verdict two = solves_leader_election(as_network(parse("leader! | leader!")),
                                             LeaderElectionSpec::leader_slave("leader", "slave"), 8);
  CHECK(two.outcome == Outcome::Fails);
  CHECK(two.witnesses.size() == 1);

  const Verdict split = solves_leader_election(as_network(parse("out!'1' | out!'2'")),
                                               LeaderElectionSpec::indexed("out"), 8);
  CHECK(split.outcome == Outcome::Fails);

  CHECK_THROWS_AS(solves_leader_election(as_network(parse("new out in (out!'1' | out?)")),
                                         LeaderElectionSpec::indexed("out"), 8),
                  SpecError);
  CHECK_THROWS_AS(solves_leader_election(as_network(parse("new r in out!r")),
                                         LeaderElectionSpec::indexed("out"), 8),
                  SpecError);
}

TEST_CASE("must succeed") {
  CHECK(must_succeed(parse("a?.0 + a!.ok"), 64).outcome == Outcome::Fails);
  CHECK(must_succeed(parse("(a?.0 + a!.ok) | (a?.0 + a!.ok)"), 64).outcome ==
        Outcome::Holds);
  CHECK(must_succeed(parse("ok"), 64).outcome == Outcome::Holds);
  CHECK(must_succeed(parse("0"), 64).outcome == Outcome::Fails);
  CHECK(must_succeed(parse("rep tau"), 16).outcome == Outcome::Unknown);
  CHECK(must_succeed(parse("tau.ok + tau"), 16).outcome == Outcome::Fails);
}

TEST_CASE("step existence") {
  CHECK_FALSE(has_step(parse("a? + a!"), true));
  CHECK(has_step(parse("(a? + a!) | (a? + a!)"), true));
  CHECK(has_step(parse("a? + a!"), false));
  CHECK_FALSE(has_step(parse("0"), true));
  CHECK_FALSE(has_step(parse("0"), false));
}

TEST_CASE("fixture expectations") {
  const auto all = fixtures();
  CHECK(all.size() == 5);
  for (const auto& f : all)
    for (const auto& e : f.expected) {
      const Verdict v = evaluate(f, e, 512);
      CHECK_MESSAGE(v.outcome == e.expected, f.name << " " << e.predicate);
      CHECK(v.outcome != Outcome::Unknown);
    }
  CHECK(is_separate(fixture(all, "election").net.flatten()));
  CHECK_FALSE(is_separate(fixture(all, "mixed").net.flatten()));
}

TEST_CASE("structured records round-trip") {
  const auto all = fixtures();
  const SymExecution e = find_symmetric_execution(fixture(all, "election").net, 64);
  std::vector<Json> lines;
  for (const auto& r : execution_records(e)) lines.push_back(Json::parse(r.dump()));
  const SymExecution back = execution_from_records(lines);
  CHECK(back.rounds.size() == e.rounds.size());
  CHECK(validate_symmetric_execution(back));
  CHECK(execution_records(back) == execution_records(e));

  gen::Generator g(gen::seed_from_env() + 30);
  for (int i = 0; i < 100; ++i) {
    const SymNet net = g.symnet(g.chance(0.5) ? 2 : 3, i % 4 == 0);
    const SymExecution x = find_symmetric_execution(net, 64);
    std::vector<Json> ls;
    for (const auto& r : execution_records(x)) ls.push_back(Json::parse(r.dump()));
    CHECK_MESSAGE(validate_symmetric_execution(execution_from_records(ls)),
                  format(net.flatten()));
  }
}

TEST_CASE("verdict records") {
  const auto all = fixtures();
  const Verdict v = no_symmetric_execution(fixture(all, "mixed").net, 512);
  const Json j = verdict_record("no-symmetric-execution", v, 512, {"claim"});
  CHECK(j["verdict"] == "holds");
  CHECK(j["witness"].size() == 2);
  CHECK(j["depth"] == 512);
  CHECK(j["citations"][0] == "claim");
  CHECK(label_from_json(label_json(Label::bound_output("x", "y"))) ==
        Label::bound_output("x", "y"));
  const NetState s = as_network(parse("new x in (x! | x?)"));
  CHECK(state_from_json(state_json(s)) == s);
}
