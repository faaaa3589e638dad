#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pisym/permutation.hpp"
#include "pisym/process.hpp"

namespace pisym {

enum class LabelKind { Tau, FreeOutput, BoundOutput, FreeInput };

/// tau, x?y (free input), x!y (free output) or x!(y) (bound output).
struct Label {
  LabelKind kind = LabelKind::Tau;
  Name channel;
  Name object;

  static Label tau() { return {}; }
  static Label input(Name x, Name y) {
    return {LabelKind::FreeInput, std::move(x), std::move(y)};
  }
  static Label output(Name x, Name y) {
    return {LabelKind::FreeOutput, std::move(x), std::move(y)};
  }
  static Label bound_output(Name x, Name y) {
    return {LabelKind::BoundOutput, std::move(x), std::move(y)};
  }

  bool is_tau() const { return kind == LabelKind::Tau; }
  bool is_output() const {
    return kind == LabelKind::FreeOutput || kind == LabelKind::BoundOutput;
  }

  /// n(l), fn(l), bn(l); the unit name is never reported.
  NameSet names() const;
  NameSet free_names() const;
  NameSet bound_names() const;

  /// The free output with the same channel and object.
  Label unbound() const;

  std::string to_string() const;

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

const char* kind_name(LabelKind k);

Label label_perm(const Permutation& sigma, const Label& l);

// ---------------------------------------------------------------------------
// Commitments of a single term: what it can do on its own, before the
// surrounding network decides which names are restricted.

struct Commitment {
  enum class Kind { Output, Input, Tau } kind = Kind::Tau;
  Name channel;
  Name object;        // output object; unit for object-free inputs
  bool bound = false; // output of a name restricted inside the term
  Process residue;    // Output / Tau
  std::function<Process(const Name&)> receive;  // Input
};

std::vector<Commitment> commitments(const Process& p);

// ---------------------------------------------------------------------------
// Networks: (new restricted)(c0 | (c1 | ... )) with a fixed right-nested shape.

struct NetState {
  std::vector<Name> restricted;
  std::vector<Process> components;

  Process flatten() const;
  friend bool operator==(const NetState&, const NetState&) = default;
};

/// Splits the top restriction chain and the right spine of parallel
/// compositions.
NetState as_network(const Process& p);

struct NetStep {
  Label label;
  std::vector<std::size_t> participants;  // sorted
  std::optional<std::size_t> sender;      // for communications
  std::optional<std::size_t> receiver;
  Name sync_channel;  // communications only
  Name sync_object;
  NetState target;
};

/// Every step of the network. Inputs receive names from `universe` that are
/// not restricted, plus one fresh name. Extruded names that would clash with
/// anything in the network, the universe or `avoid` are renamed to primed
/// variants. Sorted deterministically.
std::vector<NetStep> net_steps(const NetState& s, const NameSet& universe,
                               const NameSet& avoid = {});

/// The fresh name offered to inputs.
Name fresh_input_name(const NetState& s, const NameSet& universe,
                      const NameSet& avoid);

// ---------------------------------------------------------------------------
// Process-level view.

struct Step {
  Label label;
  std::vector<std::size_t> participants;
  std::optional<std::size_t> sender;  // communications only
  Process target;
  friend bool operator==(const Step&, const Step&) = default;
};

/// All steps of p with canonicalized targets. Input objects range over
/// `universe` plus one fresh name.
std::vector<Step> transitions(const Process& p, const NameSet& universe);

/// Same as transitions, but targets are left exactly as derived.
std::vector<Step> raw_transitions(const Process& p, const NameSet& universe);

std::vector<Step> tau_transitions(const Process& p);

struct Trace {
  Process start;
  std::vector<Step> steps;
  bool truncated = false;

  const Process& end() const { return steps.empty() ? start : steps.back().target; }
};

struct ExecutionSet {
  std::vector<Trace> traces;
  bool truncated = false;  // some trace hit the depth bound
};

/// Maximal executions of length at most `depth`. Traces cut by the bound are
/// returned with truncated = true.
ExecutionSet max_executions(const Process& p, std::size_t depth, bool tau_only,
                            bool modulo_congruence);

}  // namespace pisym
