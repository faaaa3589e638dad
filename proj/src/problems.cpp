#include "pisym/problems.hpp"

#include <map>
#include <set>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

NameSet LeaderElectionSpec::channels() const {
  if (mode == Mode::Indexed) return {out};
  return {leader, slave};
}

namespace {

class Election {
 public:
  Election(const LeaderElectionSpec& spec, std::size_t depth)
      : spec_(spec), obs_(spec.channels()), depth_(depth) {}

  Verdict run(const NetState& net) {
    path_.start = net;
    search(net);
    Verdict v;
    if (failed_) {
      v.outcome = Outcome::Fails;
      v.witnesses = {witness_};
      v.reason = why_;
    } else if (truncated_) {
      v.outcome = Outcome::Unknown;
      v.reason = "depth bound reached";
    } else {
      v.outcome = Outcome::Holds;
      v.reason = "every maximal execution elects exactly one leader";
    }
    return v;
  }

 private:
  void search(const NetState& state) {
    if (failed_) return;
    std::vector<NetStep> steps;
    for (auto& s : net_steps(state, free_names(state.flatten()))) {
      if (s.label.is_tau()) {
        steps.push_back(std::move(s));
      } else if (s.label.is_output() && obs_.count(s.label.channel)) {
        if (s.label.kind == LabelKind::BoundOutput)
          throw SpecError("observation channel " + s.label.channel +
                          " carries a bound name");
        steps.push_back(std::move(s));
      }
    }
    if (steps.empty()) {
      if (auto why = violation(); !why.empty()) {
        failed_ = true;
        witness_ = path_;
        why_ = why;
      }
      return;
    }
    if (path_.steps.size() >= depth_) {
      truncated_ = true;
      return;
    }
    for (const auto& s : steps) {
      path_.steps.push_back(trace_step(s));
      search(s.target);
      path_.steps.pop_back();
      if (failed_) return;
    }
  }

  std::string violation() const {
    const std::size_t n = path_.start.components.size();
    std::map<std::size_t, NameSet> sent;       // indexed mode
    std::set<std::size_t> leaders, slaves;     // leader/slave mode
    for (const auto& s : path_.steps) {
      if (s.label.is_tau()) continue;
      const std::size_t who = s.participants.at(0);
      if (spec_.mode == LeaderElectionSpec::Mode::Indexed) {
        sent[who].insert(s.label.object);
      } else if (s.label.channel == spec_.leader) {
        leaders.insert(who);
      } else {
        slaves.insert(who);
      }
    }
    if (spec_.mode == LeaderElectionSpec::Mode::Indexed) {
      NameSet values;
      for (std::size_t i = 0; i < n; ++i) {
        if (!sent.count(i))
          return "component " + std::to_string(i) + " never announces a leader";
        values.insert(sent[i].begin(), sent[i].end());
      }
      if (values.size() > 1) return "components announce different leaders";
      return {};
    }
    if (leaders.size() != 1)
      return std::to_string(leaders.size()) + " components announce leader";
    for (std::size_t i = 0; i < n; ++i) {
      const bool l = leaders.count(i), s = slaves.count(i);
      if (l && s)
        return "component " + std::to_string(i) + " announces leader and slave";
      if (!l && !s)
        return "component " + std::to_string(i) + " announces nothing";
    }
    return {};
  }

  const LeaderElectionSpec& spec_;
  NameSet obs_;
  std::size_t depth_;
  NetTrace path_;
  bool failed_ = false;
  bool truncated_ = false;
  NetTrace witness_;
  std::string why_;
};

class Success {
 public:
  explicit Success(std::size_t depth) : depth_(depth) {}

  Verdict run(const Process& p) {
    path_.start = as_network(p);
    search(canonicalize(p));
    Verdict v;
    if (failed_) {
      v.outcome = Outcome::Fails;
      v.witnesses = {witness_};
      v.reason = "a maximal execution never reaches ok";
    } else if (truncated_) {
      v.outcome = Outcome::Unknown;
      v.reason = "depth bound reached";
    } else {
      v.outcome = Outcome::Holds;
      v.reason = "every maximal execution reaches ok";
    }
    return v;
  }

 private:
  void search(const Process& p) {
    if (failed_ || has_top_level_success(p)) return;
    const std::string key = format(p);
    if (done_.count(key)) return;
    const auto steps = tau_transitions(p);
    if (steps.empty()) {
      failed_ = true;
      witness_ = path_;
      return;
    }
    if (path_.steps.size() >= depth_) {
      truncated_ = true;
      return;
    }
    for (const auto& s : steps) {
      path_.steps.push_back(
          {s.label, s.participants, s.sender, as_network(s.target)});
      search(s.target);
      path_.steps.pop_back();
      if (failed_) return;
    }
    if (!truncated_) done_.insert(key);
  }

  std::size_t depth_;
  NetTrace path_;
  bool failed_ = false;
  bool truncated_ = false;
  NetTrace witness_;
  std::set<std::string> done_;
};

Verdict from_bool(bool b, const std::string& yes, const std::string& no) {
  Verdict v;
  v.outcome = b ? Outcome::Holds : Outcome::Fails;
  v.reason = b ? yes : no;
  return v;
}

}  // namespace

Verdict solves_leader_election(const NetState& net,
                               const LeaderElectionSpec& spec,
                               std::size_t depth) {
  const NameSet restricted(net.restricted.begin(), net.restricted.end());
  for (const auto& c : spec.channels()) {
    bool bound = restricted.count(c) > 0;
    for (const auto& p : net.components) bound |= bound_names(p).count(c) > 0;
    if (bound)
      throw SpecError("observation channel " + c + " is bound in the network");
  }
  return Election(spec, depth).run(net);
}

Verdict must_succeed(const Process& p, std::size_t depth) {
  return Success(depth).run(p);
}

bool has_step(const Process& p, bool tau_only) {
  if (tau_only) return !tau_transitions(p).empty();
  return !transitions(p, free_names(p)).empty();
}

// ---------------------------------------------------------------------------

namespace {

Fixture make(std::string name, const std::string& seed, std::size_t n,
             const std::string& cycles, std::vector<Name> restricted) {
  Fixture f;
  f.name = name;
  f.file = name + ".pi";
  f.net = build_symmetric(parse(seed), n, Permutation::from_cycles(cycles, n),
                          restricted);
  f.source = format(f.net.flatten());
  return f;
}

}  // namespace

std::vector<Fixture> fixtures() {
  using O = Outcome;
  std::vector<Fixture> out;

  Fixture election = make("election", "x! | x?.out!'1' + y?.out!'2'", 2, "(x y)", {});
  election.election = LeaderElectionSpec::indexed("out");
  election.expected = {
      {"is-separate", false, O::Holds, "written with separate choice only"},
      {"leader-election", false, O::Holds,
       "every execution agrees on one announced index"},
      {"symmetric-execution", false, O::Holds,
       "symmetry is restored after every second step"},
  };
  out.push_back(election);

  Fixture mixed =
      make("mixed", "x!.'1'! + y?.'2'!", 2, "(x y)('1' '2')", {"x", "y"});
  mixed.expected = {
      {"is-separate", false, O::Fails, "uses mixed choice"},
      {"two-executions", false, O::Holds,
       "exactly two maximal executions up to congruence"},
      {"no-symmetric-execution", false, O::Holds,
       "every execution breaks the initial symmetry"},
  };
  out.push_back(mixed);

  Fixture leader_slave = make("leader-slave", "a?.slave! + a!.leader!", 2, "id", {});
  leader_slave.election = LeaderElectionSpec::leader_slave("leader", "slave");
  leader_slave.expected = {
      {"is-separate", false, O::Fails, "uses mixed choice"},
      {"leader-election", false, O::Holds,
       "one copy announces leader, the other slave"},
  };
  out.push_back(leader_slave);

  Fixture success = make("success", "a?.0 + a!.ok", 2, "id", {});
  success.expected = {
      {"must-succeed", false, O::Holds, "the pair always reaches ok"},
      {"must-succeed", true, O::Fails, "a single copy is stuck without ok"},
  };
  out.push_back(success);

  Fixture step = make("step", "a? + a!", 2, "id", {});
  step.expected = {
      {"tau-step", false, O::Holds, "the pair can communicate"},
      {"tau-step", true, O::Fails, "a single copy has no internal step"},
  };
  out.push_back(step);

  return out;
}

Verdict evaluate(const Fixture& f, const Expectation& e, std::size_t depth) {
  const Process subject = e.on_component ? f.net.seed : f.net.flatten();
  if (e.predicate == "is-separate")
    return from_bool(is_separate(subject), "separate choice",
                     "mixed choice occurs");
  if (e.predicate == "leader-election")
    return solves_leader_election(
        e.on_component ? as_network(subject) : f.net.state(), f.election,
        depth);
  if (e.predicate == "must-succeed") return must_succeed(subject, depth);
  if (e.predicate == "tau-step")
    return from_bool(has_step(subject, true), "a tau step exists",
                     "no tau step");
  if (e.predicate == "no-symmetric-execution")
    return no_symmetric_execution(f.net, depth);
  if (e.predicate == "symmetric-execution") {
    auto ex = find_symmetric_execution(f.net, depth);
    Verdict v;
    v.witnesses = {ex.trace()};
    if (ex.status == SymExecution::Status::Truncated) {
      v.outcome = Outcome::Unknown;
      v.reason = "depth bound reached";
    } else {
      const bool ok = static_cast<bool>(validate_symmetric_execution(ex));
      v.outcome = ok ? Outcome::Holds : Outcome::Fails;
      v.reason = ok ? "symmetric execution found" : "execution did not validate";
    }
    return v;
  }
  if (e.predicate == "two-executions") {
    auto ex = max_executions(subject, depth, false, true);
    Verdict v;
    for (const auto& t : ex.traces) {
      NetTrace nt;
      nt.start = as_network(t.start);
      for (const auto& s : t.steps)
        nt.steps.push_back(
            {s.label, s.participants, s.sender, as_network(s.target)});
      v.witnesses.push_back(std::move(nt));
    }
    if (ex.truncated) {
      v.outcome = Outcome::Unknown;
      v.reason = "depth bound reached";
    } else {
      v.outcome = ex.traces.size() == 2 ? Outcome::Holds : Outcome::Fails;
      v.reason = std::to_string(ex.traces.size()) + " maximal executions";
    }
    return v;
  }
  throw std::invalid_argument("unknown predicate " + e.predicate);
}

}  // namespace pisym
