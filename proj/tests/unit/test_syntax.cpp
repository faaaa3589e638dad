#include <doctest.h>

#include <functional>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"
#include "support/gen.hpp"

using namespace pisym;

namespace {

// Free names computed directly from the term shape.
NameSet oracle_fn(const Process& p) {
  NameSet out;
  std::function<void(const Process&, NameSet)> go = [&](const Process& q,
                                                         NameSet bound) {
    auto use = [&](const Name& n) {
      if (!is_unit(n) && !bound.count(n)) out.insert(n);
    };
    switch (q.kind()) {
      case Process::Kind::Sum:
        for (const auto& b : q.branches()) {
          NameSet inner = bound;
          if (b.guard.kind == GuardKind::Output) {
            use(b.guard.channel);
            use(b.guard.object);
          } else if (b.guard.kind == GuardKind::Input) {
            use(b.guard.channel);
            if (b.guard.binds()) inner.insert(b.guard.object);
          }
          go(b.cont, inner);
        }
        break;
      case Process::Kind::Par:
        go(q.left(), bound);
        go(q.right(), bound);
        break;
      case Process::Kind::Restrict:
        bound.insert(q.binder());
        go(q.body(), bound);
        break;
      case Process::Kind::Repl:
        go(q.body(), bound);
        break;
      case Process::Kind::Success:
        break;
    }
  };
  go(p, {});
  return out;
}

// Binder-free terms: the congruence is commutativity of Par alone.
bool oracle_comm_equal(const Process& p, const Process& q) {
  if (p.kind() != q.kind()) return false;
  if (p.kind() == Process::Kind::Par)
    return (oracle_comm_equal(p.left(), q.left()) &&
            oracle_comm_equal(p.right(), q.right())) ||
           (oracle_comm_equal(p.left(), q.right()) &&
            oracle_comm_equal(p.right(), q.left()));
  if (p.kind() == Process::Kind::Sum) {
    if (p.branches().size() != q.branches().size()) return false;
    for (std::size_t i = 0; i < p.branches().size(); ++i)
      if (!(p.branches()[i].guard == q.branches()[i].guard) ||
          !oracle_comm_equal(p.branches()[i].cont, q.branches()[i].cont))
        return false;
    return true;
  }
  return p == q;
}

}  // namespace

TEST_CASE("free and bound names") {
  CHECK(free_names(parse("0")).empty());
  CHECK(free_names(parse("x!y.0")) == NameSet{"x", "y"});
  CHECK(bound_names(parse("new z in x?(w).0")) == NameSet{"z", "w"});
  CHECK(free_names(parse("x! | x?.out!'1' + y?.out!'2'")) ==
        NameSet{"x", "y", "out", "1", "2"});
}

TEST_CASE("free names agree with a direct traversal") {
  gen::Generator g(gen::seed_from_env() + 1);
  gen::Options o;
  o.separate = false;
  o.replication = true;
  for (int i = 0; i < 300; ++i) {
    const Process p = g.process(o);
    CHECK_MESSAGE(free_names(p) == oracle_fn(p), format(p));
  }
}

TEST_CASE("substitution") {
  CHECK(format(substitute(parse("z!w.0"), {{"z", "u"}})) == "u!w");
  const Process s = substitute(parse("new y in z!y.0"), {{"z", "y"}});
  CHECK(s.kind() == Process::Kind::Restrict);
  CHECK(s.binder() != "y");
  CHECK(congruent(s, parse("new y' in y!y'")));
  CHECK(free_names(s) == NameSet{"y"});
  CHECK(format(substitute(parse("x! | x?.out!'1' + y?.out!'2'"),
                          {{"x", "y"}, {"y", "x"}})) ==
        "y! | y?.out!'1' + x?.out!'2'");
}

TEST_CASE("permutations act on free names") {
  const Process p = parse("x!.'1'! + y?.'2'!");
  CHECK(apply_perm(Permutation::identity(2), p) == p);
  const auto sigma = Permutation::from_cycles("(x y)('1' '2')", 2);
  CHECK(format(apply_perm(sigma, p)) == "y!.'2'! + x?.'1'!");
  CHECK(apply_perm(sigma, apply_perm(sigma, p)) == p);
  CHECK_THROWS_AS(apply_perm(Permutation::from_cycles("(z w)", 2),
                             parse("x?(z).z!")),
                  PreconditionError);
}

TEST_CASE("structural congruence") {
  CHECK(congruent(parse("a! | b?"), parse("b? | a!")));
  CHECK(congruent(parse("(new x in x!y) | u!"), parse("new x in (x!y | u!)")));
  CHECK(congruent(parse("new x in a!x"), parse("new q in a!q")));
  CHECK_FALSE(congruent(parse("a! | (b! | c!)"), parse("(a! | b!) | c!")));
  CHECK_FALSE(congruent(parse("new x in (a!x | b!)"), parse("new x in a!x")));
}

TEST_CASE("congruence on binder-free terms is commutativity") {
  gen::Generator g(gen::seed_from_env() + 2);
  gen::Options o;
  o.restriction = false;
  o.prefixes = 4;
  int checked = 0;
  for (int i = 0; i < 3000 && checked < 200; ++i) {
    const Process p = g.process(o), q = g.process(o);
    if (!bound_names(p).empty() || !bound_names(q).empty()) continue;
    ++checked;
    CHECK_MESSAGE(congruent(p, q) == oracle_comm_equal(p, q),
                  format(p) << " vs " << format(q));
    CHECK(congruent(p, p));
  }
  CHECK(checked > 50);
}

TEST_CASE("separate choice") {
  CHECK(is_separate(parse("x?.out!'1' + y?.out!'2'")));
  CHECK_FALSE(is_separate(parse("a?.slave! + a!.leader!")));
  CHECK(is_separate(parse("0")));
  CHECK(is_separate(parse("tau.a! + b?")));
  CHECK(is_separate(parse("tau + a!")));
}

TEST_CASE("parser") {
  const Process p = parse("x!y.0");
  REQUIRE(p.kind() == Process::Kind::Sum);
  CHECK(p.branches().at(0).guard == Guard::output("x", "y"));
  const Process net = parse("new x,y in (x!.'1'! + y?.'2'! | y!.'2'! + x?.'1'!)");
  CHECK(free_names(net) == NameSet{"1", "2"});
  CHECK_THROWS_AS(parse("x?(z.P"), ParseError);
  try {
    parse("x?(z.P");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 3);  // the unclosed "("
  }
  CHECK_THROWS_AS(parse("x?(z).0 | z!"), WellformednessError);
  CHECK_THROWS_AS(parse("new z in new z in z!"), WellformednessError);
  CHECK_NOTHROW(parse("x?(z).z! | x?(z).z!"));
  CHECK(format(parse("# comment\nx! # trailing\n")) == "x!");
}

TEST_CASE("parse and format round-trip") {
  gen::Generator g(gen::seed_from_env() + 3);
  gen::Options o;
  o.separate = false;
  o.replication = true;
  for (int i = 0; i < 300; ++i) {
    const Process p = g.process(o);
    const Process q = parse(format(p));
    CHECK_MESSAGE(q == p, format(p));
    CHECK(format(q) == format(p));
  }
}
