#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pisym/execution.hpp"

namespace pisym {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LeaderElectionSpec {
  enum class Mode { Indexed, LeaderSlave };

  Mode mode = Mode::Indexed;
  Name out = "out";
  Name leader = "leader";
  Name slave = "slave";

  static LeaderElectionSpec indexed(Name out) {
    return {Mode::Indexed, std::move(out), {}, {}};
  }
  static LeaderElectionSpec leader_slave(Name leader, Name slave) {
    return {Mode::LeaderSlave, {}, std::move(leader), std::move(slave)};
  }
  NameSet channels() const;
};

/// Runs the network closed, except for outputs on the observation channels.
/// Indexed: in every maximal execution each component outputs the same value
/// on `out` and nothing else there. Leader/slave: in every maximal execution
/// exactly one component announces `leader`, every other one `slave`.
/// Throws SpecError when an observation channel is bound in the network.
Verdict solves_leader_election(const NetState& net,
                               const LeaderElectionSpec& spec,
                               std::size_t depth);

/// Every maximal tau-execution reaches a state with an unguarded ok.
Verdict must_succeed(const Process& p, std::size_t depth);

bool has_step(const Process& p, bool tau_only);

struct Expectation {
  std::string predicate;   // is-separate, leader-election, ...
  bool on_component = false;  // evaluate on the seed instead of the network
  Outcome expected = Outcome::Holds;
  std::string claim;
};

struct Fixture {
  std::string name;
  std::string file;    // under fixtures/
  std::string source;  // network text
  SymNet net;
  LeaderElectionSpec election;
  std::vector<Expectation> expected;
};

std::vector<Fixture> fixtures();

/// Evaluates one expectation of a fixture at the given depth.
Verdict evaluate(const Fixture& f, const Expectation& e, std::size_t depth);

}  // namespace pisym
