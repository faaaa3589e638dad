#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisym/lts.hpp"
#include "pisym/symmetry.hpp"

namespace pisym {

/// A symmetric network could not restore symmetry after a step. For separate
/// choice this cannot happen, so it is never caught internally.
class MimicFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NetTraceStep {
  Label label;
  std::vector<std::size_t> participants;
  std::optional<std::size_t> sender;
  NetState target;
};

NetTraceStep trace_step(const NetStep& s);

struct NetTrace {
  NetState start;
  std::vector<NetTraceStep> steps;
  bool truncated = false;

  const NetState& end() const {
    return steps.empty() ? start : steps.back().target;
  }
  std::vector<Label> labels() const;
};

enum class Outcome { Holds, Fails, Unknown };

const char* outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::vector<NetTrace> witnesses;
  std::string reason;
};

struct Round {
  std::vector<Label> labels;
  std::vector<NetTraceStep> steps;
  Permutation sigma;              // sigma_k, extends the previous one
  std::vector<Name> restricted;   // x_k
  std::vector<Name> scope;        // names whose output may stay bound
  SymNet end;
};

struct SymExecution {
  enum class Status { Terminated, Truncated };

  SymNet start;
  std::vector<Round> rounds;
  Status status = Status::Terminated;
  /// Round after which a state already seen at an earlier boundary recurred.
  std::optional<std::size_t> lasso;

  NetTrace trace() const;
};

/// Names the symmetric-execution search keeps away from fresh choices.
NameSet execution_avoid(const Permutation& sigma,
                        const std::vector<Name>& restricted);

/// Steps of a network during a symmetric execution under sigma. Inputs only
/// receive `input_object`, or one fresh name when it is the unit. Extruded
/// names avoid `known`, the names already used by the round.
std::vector<NetStep> symmetric_steps(const NetState& state,
                                     const Permutation& sigma,
                                     const Name& input_object = kUnit,
                                     const NameSet& known = {});

/// Completes a round started by `first`. Throws PreconditionError when the
/// seed is not separate-choice or `first` is not a step of the network;
/// throws MimicFailure when no completion exists.
Round mimic_round(const SymNet& net, const NetStep& first);

SymExecution find_symmetric_execution(const SymNet& net,
                                      std::size_t max_rounds);

struct Validation {
  bool ok = true;
  std::size_t round = 0;
  std::size_t step = 0;
  std::string reason;

  explicit operator bool() const { return ok; }
};

Validation validate_symmetric_execution(const SymExecution& e);

/// Exhaustive search for a symmetric execution of at most `depth` steps.
/// Holds when every execution breaks symmetry (witnesses: one prefix per
/// distinct refutation), Fails when a symmetric maximal execution exists
/// (witness: that execution), Unknown when the bound cut the search.
Verdict no_symmetric_execution(const SymNet& net, std::size_t depth);

struct Square {
  std::optional<Process> closing;  // S
  std::string reason;              // why no S exists
};

/// Closes p --out--> Q, p --in--> R by Q --in--> S and R --out--> S.
/// Throws PreconditionError for mixed-choice p unless `force`.
Square confluence_square(const Process& p, const Step& out_step,
                         const Step& in_step, bool force = false);

struct ConfluenceReport {
  std::size_t pairs = 0;
  std::vector<std::pair<Step, Step>> violations;
};

ConfluenceReport check_confluence(const Process& p, bool force = false);

/// Symmetric execution of the degree-n' subnetwork mirroring e round by
/// round. Throws PreconditionError unless 0 < n' < n, n' divides n and
/// sigma^n' = id.
SymExecution subdivide(const SymExecution& e, std::size_t sub_degree);

}  // namespace pisym
