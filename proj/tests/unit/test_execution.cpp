#include <doctest.h>

#include "pisym/execution.hpp"
#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"
#include "support/gen.hpp"

using namespace pisym;

namespace {

SymNet net_of(const std::string& seed, std::size_t n, const std::string& cycles,
              std::vector<Name> restricted = {}) {
  return build_symmetric(parse(seed), n, Permutation::from_cycles(cycles, n),
                         restricted);
}

SymNet election() { return net_of("x! | x?.out!'1' + y?.out!'2'", 2, "(x y)"); }
SymNet mixed() { return net_of("x!.'1'! + y?.'2'!", 2, "(x y)('1' '2')", {"x", "y"}); }

}  // namespace

TEST_CASE("mimic a single internal step") {
  const SymNet n = net_of("x!u | x?(z).0", 2, "id");
  const auto first = symmetric_steps(n.state(), n.sigma);
  REQUIRE(!first.empty());
  const Round r = mimic_round(n, first.front());
  CHECK(r.labels == std::vector<Label>(2, Label::tau()));
  CHECK(congruent(r.end.flatten(), parse("(0 | 0) | 0 | 0")));
  CHECK(r.sigma.extends(n.sigma));
}

TEST_CASE("mimic restores symmetry on the separate-choice election") {
  const SymNet n = election();
  for (const auto& first : symmetric_steps(n.state(), n.sigma)) {
    const Round r = mimic_round(n, first);
    CHECK(recognize_symmetric(r.end.state(), r.sigma));
    CHECK(r.steps.size() == 2);
  }
}

TEST_CASE("mimic rejects mixed choice") {
  const SymNet n = net_of("a? + a!", 2, "id");
  const auto first = symmetric_steps(n.state(), n.sigma);
  REQUIRE(!first.empty());
  CHECK_THROWS_AS(mimic_round(n, first.front()), PreconditionError);
  CHECK_THROWS_AS(find_symmetric_execution(n, 4), PreconditionError);
}

TEST_CASE("symmetric executions") {
  const SymExecution empty = find_symmetric_execution(net_of("0", 3, "id"), 8);
  CHECK(empty.rounds.empty());
  CHECK(empty.status == SymExecution::Status::Terminated);
  CHECK(validate_symmetric_execution(empty));

  const SymExecution e3 = find_symmetric_execution(election(), 64);
  CHECK(e3.status == SymExecution::Status::Terminated);
  REQUIRE(e3.rounds.size() == 2);
  CHECK(e3.trace().steps.size() == 4);
  CHECK(e3.rounds[0].labels == std::vector<Label>(2, Label::tau()));
  for (const auto& r : e3.rounds) CHECK(recognize_symmetric(r.end.state(), r.sigma));
  CHECK(validate_symmetric_execution(e3));

  const SymExecution one = find_symmetric_execution(net_of("x!u | x?(z).0", 2, "id"), 8);
  CHECK(one.rounds.size() == 1);
  CHECK(validate_symmetric_execution(one));
}

TEST_CASE("extrusion from inside the copies extends sigma") {
  for (std::size_t n : {2, 3}) {
    const SymNet net = net_of("new r in a!r", n, "id");
    const SymExecution e = find_symmetric_execution(net, 8);
    REQUIRE(e.rounds.size() == 1);
    const Round& r = e.rounds[0];
    NameSet objects;
    for (const auto& l : r.labels) {
      CHECK(l.kind == LabelKind::BoundOutput);
      objects.insert(l.object);
    }
    CHECK(objects.size() == n);
    CHECK(r.sigma.support() == objects);
    CHECK(validate_symmetric_execution(e));
  }
}

TEST_CASE("validation rejects forged executions") {
  SymExecution e = find_symmetric_execution(election(), 64);
  REQUIRE(e.rounds.size() == 2);
  SymExecution forged = e;
  forged.rounds[0].steps[1].target = forged.rounds[0].steps[0].target;
  const Validation v = validate_symmetric_execution(forged);
  CHECK_FALSE(v);
  CHECK(v.round == 0);
  CHECK(v.step == 1);

  SymExecution wrong_label = e;
  wrong_label.rounds[1].labels[1] = Label::output("out", "2");
  CHECK_FALSE(validate_symmetric_execution(wrong_label));

  SymExecution early = e;
  early.rounds.pop_back();
  CHECK_FALSE(validate_symmetric_execution(early));
}

TEST_CASE("a mixed-choice run recast as a round does not validate") {
  const SymNet n = mixed();
  const auto firsts = net_steps(n.state(), {});
  REQUIRE(firsts.size() == 2);
  const NetStep& tau = firsts[0];
  const auto outs = net_steps(tau.target, {});
  REQUIRE(!outs.empty());
  const NetStep& o1 = outs[0];
  const auto outs2 = net_steps(o1.target, {});
  REQUIRE(outs2.size() == 1);

  SymExecution e;
  e.start = n;
  Round r;
  r.steps = {trace_step(tau), trace_step(o1)};
  r.labels = {tau.label, o1.label};
  r.sigma = n.sigma;
  r.restricted = o1.target.restricted;
  r.end.components = o1.target.components;
  r.end.restricted = o1.target.restricted;
  r.end.sigma = n.sigma;
  r.end.degree = 2;
  e.rounds = {r};
  e.status = SymExecution::Status::Truncated;
  CHECK_FALSE(validate_symmetric_execution(e));
}

TEST_CASE("refuting symmetric executions") {
  const Verdict v4 = no_symmetric_execution(mixed(), 512);
  CHECK(v4.outcome == Outcome::Holds);
  CHECK(v4.witnesses.size() == 2);

  const Verdict nil = no_symmetric_execution(net_of("0", 2, "id"), 8);
  CHECK(nil.outcome == Outcome::Fails);
  REQUIRE(nil.witnesses.size() == 1);
  CHECK(nil.witnesses[0].steps.empty());

  const Verdict one = no_symmetric_execution(net_of("x!u | x?(z).0", 2, "id"), 8);
  CHECK(one.outcome == Outcome::Fails);
  REQUIRE(one.witnesses.size() == 1);
  CHECK(one.witnesses[0].labels() == std::vector<Label>(2, Label::tau()));

  const Verdict cut = no_symmetric_execution(mixed(), 1);
  CHECK(cut.outcome == Outcome::Unknown);
}

TEST_CASE("refutation agrees with the constructive search on separate choice") {
  gen::Generator g(gen::seed_from_env() + 20);
  for (int i = 0; i < 40; ++i) {
    gen::Options o;
    o.prefixes = 3;
    const Process seed = g.process(o);
    const Permutation s = g.sigma(2);
    const SymNet net = build_symmetric(seed, 2, s, g.restricted(seed, s));
    const Verdict v = no_symmetric_execution(net, 24);
    CHECK_MESSAGE(v.outcome != Outcome::Holds, format(net.flatten()));
  }
}

TEST_CASE("confluence squares") {
  const Process p = parse("x!u.0 | z?(w).w!.0");
  const auto out = transitions(p, {"v"});
  const Step* o = nullptr;
  const Step* in = nullptr;
  for (const auto& s : out) {
    if (s.label == Label::output("x", "u")) o = &s;
    if (s.label == Label::input("z", "v")) in = &s;
  }
  REQUIRE(o);
  REQUIRE(in);
  const Square sq = confluence_square(p, *o, *in);
  REQUIRE(sq.closing);
  CHECK(congruent(*sq.closing, parse("0 | v!")));

  CHECK(check_confluence(parse("x!u | y!w")).pairs == 0);
  CHECK_THROWS_AS(check_confluence(parse("x!u + z?(w)")), PreconditionError);
  const auto forced = check_confluence(parse("x!u + z?(w)"), true);
  CHECK(forced.pairs > 0);
  CHECK(forced.violations.size() == forced.pairs);
}

TEST_CASE("subdivision") {
  const SymNet n = net_of("x!u | x?(z).0", 2, "id");
  const SymExecution e = find_symmetric_execution(n, 8);
  const SymExecution half = subdivide(e, 1);
  CHECK(half.start.degree == 1);
  REQUIRE(half.rounds.size() == e.rounds.size());
  CHECK(half.trace().steps.size() * 2 == e.trace().steps.size());
  CHECK(validate_symmetric_execution(half));

  CHECK_THROWS_AS(subdivide(e, 2), PreconditionError);
  CHECK_THROWS_AS(subdivide(find_symmetric_execution(election(), 8), 1), PreconditionError);

  const SymNet four = net_of("a! | a?.b!d", 4, "(d u)");
  const SymExecution e4 = find_symmetric_execution(four, 8);
  const SymExecution two = subdivide(e4, 2);
  CHECK(two.start.degree == 2);
  CHECK(validate_symmetric_execution(two));
}
