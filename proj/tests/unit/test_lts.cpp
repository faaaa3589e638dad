#include <doctest.h>

#include <algorithm>

#include "pisym/lts.hpp"
#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

using namespace pisym;

namespace {

std::vector<std::string> labels_of(const std::vector<Step>& steps) {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.label.to_string());
  return out;
}

bool has(const std::vector<Step>& steps, const Label& l, const std::string& target) {
  return std::any_of(steps.begin(), steps.end(), [&](const Step& s) {
    return s.label == l && congruent(s.target, parse(target));
  });
}

}  // namespace

TEST_CASE("labels") {
  CHECK(Label::tau().to_string() == "tau");
  CHECK(Label::output("a", kUnit).to_string() == "a!");
  CHECK(Label::bound_output("x", "y").to_string() == "x!(y)");
  CHECK(Label::input("x", "c").to_string() == "x?c");
  CHECK(Label::bound_output("x", "y").bound_names() == NameSet{"y"});
  CHECK(Label::bound_output("x", "y").free_names() == NameSet{"x"});
  CHECK(Label::bound_output("x", "y").unbound() == Label::output("x", "y"));
  CHECK(Label::output("a", kUnit).names() == NameSet{"a"});
}

TEST_CASE("label permutation") {
  const auto ab = Permutation::from_cycles("(a b)", 2);
  CHECK(label_perm(ab, Label::tau()) == Label::tau());
  CHECK(label_perm(ab, Label::output("a", "c")) == Label::output("b", "c"));
  const auto s4 = Permutation::from_cycles("(x y)('1' '2')", 2);
  CHECK(label_perm(s4, Label::output("1", kUnit)) == Label::output("2", kUnit));
}

TEST_CASE("transitions of single terms") {
  CHECK(transitions(parse("0"), {}).empty());

  const auto open = transitions(parse("new y in x!y.0"), {"x"});
  REQUIRE(open.size() == 1);
  CHECK(open[0].label == Label::bound_output("x", "y"));
  CHECK(congruent(open[0].target, parse("0")));

  const auto in = transitions(parse("x?(z).z!u.0"), {"x", "u"});
  CHECK(in.size() == 3);
  CHECK(has(in, Label::input("x", "x"), "x!u"));
  CHECK(has(in, Label::input("x", "u"), "u!u"));
  CHECK(has(in, Label::input("x", "c"), "c!u"));
}

TEST_CASE("fresh input name avoids the universe") {
  const auto in = transitions(parse("x?(z).z!c"), {"x", "c"});
  CHECK(std::count_if(in.begin(), in.end(), [](const Step& s) {
          return s.label == Label::input("x", "c'");
        }) == 1);
}

TEST_CASE("unit sort discipline") {
  CHECK(tau_transitions(parse("a! | a?(z).z!")).empty());
  CHECK(tau_transitions(parse("a!b | a?")).empty());
  CHECK(tau_transitions(parse("a! | a?")).size() == 1);
}

TEST_CASE("internal steps") {
  CHECK(tau_transitions(parse("a? + a!")).empty());
  const auto two = tau_transitions(parse("a? + a! | a? + a!"));
  CHECK(two.size() == 2);
  for (const auto& s : two) {
    CHECK(s.participants == std::vector<std::size_t>{0, 1});
    CHECK(congruent(s.target, parse("0 | 0")));
  }
  CHECK(two[0].sender != two[1].sender);

  const auto comm = tau_transitions(parse("x!u.0 | x?(z).z!w.0"));
  REQUIRE(comm.size() == 1);
  CHECK(congruent(comm[0].target, parse("0 | u!w")));
}

TEST_CASE("scope extrusion and closing") {
  const auto s = tau_transitions(parse("(new r in a!r.r!) | a?(z).z?"));
  REQUIRE(s.size() == 1);
  CHECK(congruent(s[0].target, parse("new r in (r! | r?)")));
  const auto after = tau_transitions(s[0].target);
  REQUIRE(after.size() == 1);
  CHECK(congruent(after[0].target, parse("new r in (0 | 0)")));
}

TEST_CASE("replication") {
  const auto s = tau_transitions(parse("rep a! | a?.b!"));
  REQUIRE(s.size() == 1);
  CHECK(congruent(s[0].target, parse("(0 | rep a!) | b!")));
  const auto self = tau_transitions(parse("rep (a! | a?)"));
  CHECK(!self.empty());
}

TEST_CASE("network of the mixed-choice pair") {
  const Process net = parse("new x,y in (x!.'1'! + y?.'2'! | y!.'2'! + x?.'1'!)");
  const auto steps = transitions(net, free_names(net));
  REQUIRE(steps.size() == 2);
  for (const auto& s : steps) {
    CHECK(s.label.is_tau());
    CHECK(s.participants == std::vector<std::size_t>{0, 1});
  }
  CHECK(has(steps, Label::tau(), "new x,y in ('1'! | '1'!)"));
  CHECK(has(steps, Label::tau(), "new x,y in ('2'! | '2'!)"));

  const auto ex = max_executions(net, 8, false, true);
  CHECK_FALSE(ex.truncated);
  REQUIRE(ex.traces.size() == 2);
  std::vector<std::string> shapes;
  for (const auto& t : ex.traces) {
    std::string sh;
    for (const auto& st : t.steps) sh += st.label.to_string() + " ";
    shapes.push_back(sh);
    CHECK(format(drop_vacuous_restrictions(t.end())) == "0 | 0");
  }
  std::sort(shapes.begin(), shapes.end());
  CHECK(shapes == std::vector<std::string>{"tau '1'! '1'! ", "tau '2'! '2'! "});
}

TEST_CASE("maximal executions") {
  const auto nil = max_executions(parse("0"), 4, false, false);
  REQUIRE(nil.traces.size() == 1);
  CHECK(nil.traces[0].steps.empty());

  const auto one = max_executions(parse("x!u | x?(z).0"), 4, true, false);
  REQUIRE(one.traces.size() == 1);
  CHECK(one.traces[0].steps.size() == 1);

  const auto cut = max_executions(parse("rep tau"), 3, true, false);
  CHECK(cut.truncated);
}

TEST_CASE("network view") {
  const NetState s = as_network(parse("new x in (a! | b! | c!)"));
  CHECK(s.restricted == std::vector<Name>{"x"});
  CHECK(s.components.size() == 3);
  CHECK(format(s.flatten()) == "new x in (a! | b! | c!)");
  const auto steps = net_steps(as_network(parse("new a in (a! | a?.b!)")), {});
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].sender == std::optional<std::size_t>{0});
  CHECK(steps[0].receiver == std::optional<std::size_t>{1});
  CHECK(labels_of(transitions(parse("a!"), {})) == std::vector<std::string>{"a!"});
}
