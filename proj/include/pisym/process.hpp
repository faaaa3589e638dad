#pragma once

#include <memory>
#include <vector>

#include "pisym/name.hpp"

namespace pisym {

enum class GuardKind { Input, Output, Tau };

/// A prefix guarding one branch of a choice.
///
/// Input: `channel` receives into `object`, the binder. A unit binder marks an
/// object-free input that binds nothing. Output: `channel` sends `object`.
/// Tau: both names are empty.
struct Guard {
  GuardKind kind = GuardKind::Tau;
  Name channel;
  Name object;

  static Guard input(Name channel, Name binder = kUnit) {
    return {GuardKind::Input, std::move(channel), std::move(binder)};
  }
  static Guard output(Name channel, Name object = kUnit) {
    return {GuardKind::Output, std::move(channel), std::move(object)};
  }
  static Guard tau() { return {GuardKind::Tau, {}, {}}; }

  bool binds() const { return kind == GuardKind::Input && !is_unit(object); }

  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Branch;

/// Immutable process term. Copies share structure.
class Process {
 public:
  enum class Kind { Sum, Par, Restrict, Repl, Success };

  /// The empty sum.
  Process();

  static Process nil() { return Process(); }
  static Process sum(std::vector<Branch> branches);
  static Process prefix(Guard g, Process cont);
  static Process par(Process left, Process right);
  static Process restrict(Name binder, Process body);
  static Process repl(Process body);
  static Process success();

  Kind kind() const;
  bool is_nil() const;

  const std::vector<Branch>& branches() const;  // Sum
  const Process& left() const;                  // Par
  const Process& right() const;                 // Par
  const Name& binder() const;                   // Restrict
  const Process& body() const;                  // Restrict, Repl

  /// Number of nodes; used by generators and for budget checks.
  std::size_t size() const;

  friend bool operator==(const Process& a, const Process& b);

 private:
  struct Node;
  explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Branch {
  Guard guard;
  Process cont;

  friend bool operator==(const Branch&, const Branch&) = default;
};

}  // namespace pisym
