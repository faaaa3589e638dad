#include "pisym/execution.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

NetTraceStep trace_step(const NetStep& s) {
  return {s.label, s.participants, s.sender, s.target};
}

std::vector<Label> NetTrace::labels() const {
  std::vector<Label> out;
  for (const auto& s : steps) out.push_back(s.label);
  return out;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Holds:
      return "holds";
    case Outcome::Fails:
      return "fails";
    case Outcome::Unknown:
      return "unknown";
  }
  return "";
}

NetTrace SymExecution::trace() const {
  NetTrace t;
  t.start = start.state();
  for (const auto& r : rounds)
    for (const auto& s : r.steps) t.steps.push_back(s);
  t.truncated = status == Status::Truncated;
  return t;
}

NameSet execution_avoid(const Permutation& sigma,
                        const std::vector<Name>& restricted) {
  NameSet a = sigma.support();
  a.insert(restricted.begin(), restricted.end());
  return a;
}

std::vector<NetStep> symmetric_steps(const NetState& state,
                                     const Permutation& sigma,
                                     const Name& input_object,
                                     const NameSet& known) {
  NameSet universe;
  if (!is_unit(input_object)) universe.insert(input_object);
  NameSet avoid = sigma.support();
  avoid.insert(known.begin(), known.end());
  return net_steps(state, universe, avoid);
}

namespace {

bool same_step(const NetStep& a, const NetStep& b) {
  return a.label == b.label && a.participants == b.participants &&
         a.sender == b.sender && a.target == b.target;
}

bool same_step(const NetStep& a, const NetTraceStep& b) {
  return a.label == b.label && a.participants == b.participants &&
         a.sender == b.sender && a.target == b.target;
}

NameSet label_names(const std::vector<NetTraceStep>& steps, std::size_t from = 0) {
  NameSet out;
  for (std::size_t i = from; i < steps.size(); ++i)
    for (const auto& x : steps[i].label.names()) out.insert(x);
  return out;
}

Name input_object_of(const Label& l) {
  return l.kind == LabelKind::FreeInput ? l.object : kUnit;
}

// Scope for the bound-output case of the label sequence: the restricted names
// at the start of the round plus every name the round extrudes from inside a
// component.
std::vector<Name> round_scope(const std::vector<Name>& restricted,
                              const std::vector<Label>& labels) {
  std::vector<Name> scope = restricted;
  for (const auto& l : labels)
    if (l.kind == LabelKind::BoundOutput &&
        std::find(scope.begin(), scope.end(), l.object) == scope.end())
      scope.push_back(l.object);
  return scope;
}

bool is_new_name(const NetStep& s, const NetState& before) {
  return s.target.restricted.size() > before.restricted.size();
}

class Mimic {
 public:
  Mimic(const SymNet& net, const NetStep& first)
      : net_(net), first_(first), n_(net.degree) {
    if (first.sender) {
      comm_ = true;
      i_ = *first.sender;
      j_ = *first.receiver;
    } else {
      i_ = first.participants.at(0);
    }
    const Label& mu = first.label;
    process_bound_ =
        mu.kind == LabelKind::BoundOutput &&
        std::find(net.restricted.begin(), net.restricted.end(), mu.object) ==
            net.restricted.end();
    if (!comm_ && !process_bound_)
      expected_ = symmetric_label_sequence(mu, n_, net.sigma, net.restricted);
    close_ = comm_ && is_new_name(first, net.state());
  }

  std::optional<Round> run() {
    steps_.push_back(trace_step(first_));
    if (search(1, first_.target)) return round_;
    return std::nullopt;
  }

 private:
  bool accepts(std::size_t k, const NetStep& s, const NetState& before) const {
    const Permutation sk = net_.sigma.power(static_cast<long>(k));
    if (comm_) {
      if (!s.sender || *s.sender != (i_ + k) % n_ ||
          *s.receiver != (j_ + k) % n_)
        return false;
      if (s.sync_channel != sk(first_.sync_channel)) return false;
      if (close_) return is_new_name(s, before);
      return !is_new_name(s, before) &&
             s.sync_object == sk(first_.sync_object);
    }
    if (s.sender || s.participants.size() != 1 ||
        s.participants[0] != (i_ + k) % n_)
      return false;
    if (process_bound_)
      return s.label.kind == LabelKind::BoundOutput &&
             s.label.channel == sk(first_.label.channel);
    return s.label == expected_[k];
  }

  bool search(std::size_t k, const NetState& state) {
    if (k == n_) return finish(state);
    const Name obj = input_object_of(first_.label);
    for (const auto& s :
         symmetric_steps(state, net_.sigma, obj, label_names(steps_))) {
      if (!accepts(k, s, state)) continue;
      steps_.push_back(trace_step(s));
      if (search(k + 1, s.target)) return true;
      steps_.pop_back();
    }
    return false;
  }

  bool finish(const NetState& state) {
    std::vector<Label> labels;
    for (const auto& s : steps_) labels.push_back(s.label);
    auto sigma = infer_symmetry(state, net_.sigma, labels);
    if (!sigma) return false;
    auto scope = round_scope(net_.restricted, labels);
    if (symmetric_label_sequence(labels[0], n_, *sigma, scope) != labels)
      return false;
    auto end = as_symmetric(state, *sigma);
    if (!end) return false;
    round_ = Round{labels, steps_, *sigma, state.restricted, scope, *end};
    return true;
  }

  const SymNet& net_;
  const NetStep& first_;
  std::size_t n_;
  bool comm_ = false;
  bool close_ = false;
  bool process_bound_ = false;
  std::size_t i_ = 0, j_ = 0;
  std::vector<Label> expected_;
  std::vector<NetTraceStep> steps_;
  Round round_;
};

}  // namespace

Round mimic_round(const SymNet& net, const NetStep& first) {
  if (!is_separate(net.seed))
    throw PreconditionError("seed is not a separate-choice process");
  const auto steps =
      symmetric_steps(net.state(), net.sigma, input_object_of(first.label));
  if (std::none_of(steps.begin(), steps.end(),
                   [&](const NetStep& s) { return same_step(s, first); }))
    throw PreconditionError("first step " + first.label.to_string() +
                            " is not a step of the network");
  auto r = Mimic(net, first).run();
  if (!r)
    throw MimicFailure("no mimicking steps restore symmetry after " +
                       first.label.to_string() + " in " +
                       format(net.flatten()));
  return *r;
}

SymExecution find_symmetric_execution(const SymNet& net,
                                      std::size_t max_rounds) {
  if (!is_separate(net.seed))
    throw PreconditionError("seed is not a separate-choice process");
  SymExecution e;
  e.start = net;
  SymNet cur = net;
  std::set<std::string> seen{format(canonicalize(cur.flatten()))};
  while (true) {
    const auto steps = symmetric_steps(cur.state(), cur.sigma);
    if (steps.empty()) {
      e.status = SymExecution::Status::Terminated;
      return e;
    }
    if (e.rounds.size() >= max_rounds) {
      e.status = SymExecution::Status::Truncated;
      return e;
    }
    e.rounds.push_back(mimic_round(cur, steps.front()));
    cur = e.rounds.back().end;
    if (!seen.insert(format(canonicalize(cur.flatten()))).second && !e.lasso)
      e.lasso = e.rounds.size() - 1;
  }
}

Validation validate_symmetric_execution(const SymExecution& e) {
  auto fail = [](std::size_t r, std::size_t s, std::string why) {
    return Validation{false, r, s, std::move(why)};
  };
  const std::size_t n = e.start.degree;
  if (e.start.components.size() != n)
    return fail(0, 0, "start has the wrong number of components");
  if (!recognize_symmetric(e.start.state(), e.start.sigma))
    return fail(0, 0, "start is not symmetric");
  Permutation sigma = e.start.sigma;
  NetState state = e.start.state();
  for (std::size_t k = 0; k < e.rounds.size(); ++k) {
    const Round& r = e.rounds[k];
    if (r.steps.size() != n || r.labels.size() != n)
      return fail(k, 0, "round does not have " + std::to_string(n) + " steps");
    const std::vector<Name> before = state.restricted;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& st = r.steps[j];
      if (st.label != r.labels[j]) return fail(k, j, "label mismatch");
      const auto cands = symmetric_steps(
          state, sigma, input_object_of(st.label),
          label_names({r.steps.begin(), r.steps.begin() + j}));
      if (std::none_of(cands.begin(), cands.end(), [&](const NetStep& c) {
            return same_step(c, st);
          }))
        return fail(k, j, "step " + st.label.to_string() + " does not replay");
      state = st.target;
    }
    if (!r.sigma.extends(sigma))
      return fail(k, n - 1, "permutation does not extend the previous one");
    if (!r.sigma.power(static_cast<long>(n)).is_identity())
      return fail(k, n - 1, "permutation is not of degree " + std::to_string(n));
    if (!recognize_symmetric(state, r.sigma))
      return fail(k, n - 1, "end of round is not symmetric");
    if (!(r.end.state() == state) || r.restricted != state.restricted)
      return fail(k, n - 1, "recorded end state differs from the replay");
    const auto scope = round_scope(before, r.labels);
    if (symmetric_label_sequence(r.labels[0], n, r.sigma, scope) != r.labels)
      return fail(k, n - 1, "labels are not a symmetric sequence");
    sigma = r.sigma;
  }
  if (e.status == SymExecution::Status::Terminated &&
      !symmetric_steps(state, sigma).empty())
    return fail(e.rounds.size(), 0, "execution claims termination but can step");
  return {};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> trace_key(const NetTrace& t) {
  std::vector<std::string> key;
  for (const auto& s : t.steps) {
    key.push_back(s.label.to_string());
    key.push_back(format(canonicalize(s.target.flatten())));
  }
  return key;
}

class Refuter {
 public:
  Refuter(const SymNet& net, std::size_t depth)
      : n_(net.degree), depth_(depth) {
    path_.start = net.state();
  }

  Verdict run(const SymNet& net) {
    search(net.state(), net.sigma, net.restricted, 0);
    Verdict v;
    if (found_) {
      v.outcome = Outcome::Fails;
      v.witnesses = {symmetric_};
      v.reason = "a symmetric maximal execution exists";
    } else if (truncated_) {
      v.outcome = Outcome::Unknown;
      v.witnesses = std::move(witnesses_);
      v.reason = "depth bound reached before every execution was refuted";
    } else {
      v.outcome = Outcome::Holds;
      v.witnesses = std::move(witnesses_);
      v.reason = "every maximal execution breaks symmetry";
    }
    return v;
  }

 private:
  void refute() {
    if (seen_.insert(trace_key(path_)).second) witnesses_.push_back(path_);
  }

  void search(const NetState& state, Permutation sigma,
              std::vector<Name> round_restricted, std::size_t k) {
    if (found_) return;
    if (k == n_) {
      std::vector<Label> labels;
      for (std::size_t j = path_.steps.size() - n_; j < path_.steps.size(); ++j)
        labels.push_back(path_.steps[j].label);
      auto next = infer_symmetry(state, sigma, labels);
      if (!next || symmetric_label_sequence(
                       labels[0], n_, *next,
                       round_scope(round_restricted, labels)) != labels) {
        refute();
        return;
      }
      sigma = *next;
      round_restricted = state.restricted;
      k = 0;
    }
    NameSet avoid = sigma.support();
    for (const auto& x : label_names(path_.steps, path_.steps.size() - k))
      avoid.insert(x);
    const auto steps = net_steps(state, free_names(state.flatten()), avoid);
    if (steps.empty()) {
      if (k == 0) {
        found_ = true;
        symmetric_ = path_;
      } else {
        refute();
      }
      return;
    }
    if (path_.steps.size() >= depth_) {
      truncated_ = true;
      return;
    }
    for (const auto& s : steps) {
      path_.steps.push_back(trace_step(s));
      search(s.target, sigma, round_restricted, k + 1);
      path_.steps.pop_back();
      if (found_) return;
    }
  }

  std::size_t n_;
  std::size_t depth_;
  NetTrace path_;
  bool found_ = false;
  bool truncated_ = false;
  NetTrace symmetric_;
  std::vector<NetTrace> witnesses_;
  std::set<std::vector<std::string>> seen_;
};

}  // namespace

Verdict no_symmetric_execution(const SymNet& net, std::size_t depth) {
  return Refuter(net, depth).run(net);
}

// ---------------------------------------------------------------------------

Square confluence_square(const Process& p, const Step& out_step,
                         const Step& in_step, bool force) {
  if (!force && !is_separate(p))
    throw PreconditionError("process is not a separate-choice process");
  if (!out_step.label.is_output())
    throw PreconditionError("first step is not an output");
  if (in_step.label.kind != LabelKind::FreeInput)
    throw PreconditionError("second step is not an input");
  const Process& q = out_step.target;
  const Process& r = in_step.target;

  NameSet uq = free_names(q);
  if (!is_unit(in_step.label.object)) uq.insert(in_step.label.object);
  std::vector<Process> from_q;
  for (const auto& s : transitions(q, uq))
    if (s.label == in_step.label) from_q.push_back(s.target);

  const Label& o = out_step.label;
  std::vector<Process> from_r;
  for (const auto& s : transitions(r, free_names(r))) {
    if (s.label.kind != o.kind || s.label.channel != o.channel) continue;
    if (o.kind == LabelKind::FreeOutput) {
      if (s.label.object == o.object) from_r.push_back(s.target);
    } else {
      from_r.push_back(substitute(s.target, {{s.label.object, o.object}}));
    }
  }
  if (from_q.empty())
    return {std::nullopt, "after " + o.to_string() + " the input " +
                              in_step.label.to_string() + " is gone"};
  if (from_r.empty())
    return {std::nullopt, "after " + in_step.label.to_string() +
                              " the output " + o.to_string() + " is gone"};
  for (const auto& a : from_q)
    for (const auto& b : from_r)
      if (congruent(a, b)) return {canonicalize(a), {}};
  return {std::nullopt, "the two completions never meet"};
}

ConfluenceReport check_confluence(const Process& p, bool force) {
  if (!force && !is_separate(p))
    throw PreconditionError("process is not a separate-choice process");
  ConfluenceReport rep;
  const auto steps = transitions(p, free_names(p));
  for (const auto& o : steps) {
    if (!o.label.is_output()) continue;
    for (const auto& i : steps) {
      if (i.label.kind != LabelKind::FreeInput) continue;
      ++rep.pairs;
      if (!confluence_square(p, o, i, true).closing)
        rep.violations.emplace_back(o, i);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Injective correspondence from names of the small execution to names of the
// original one; names created along the way are matched on first use.
class Renaming {
 public:
  void fix(const Name& n) {
    fwd_[n] = n;
    back_[n] = n;
  }

  bool name(const Name& a, const Name& b) {
    if (is_unit(a) || is_unit(b)) return is_unit(a) && is_unit(b);
    auto it = fwd_.find(a);
    if (it != fwd_.end()) return it->second == b;
    if (back_.count(b)) return false;
    fwd_[a] = b;
    back_[b] = a;
    return true;
  }

  bool label(const Label& a, const Label& b) {
    if (a.is_tau() || b.is_tau()) return a.is_tau() && b.is_tau();
    if (a.is_output() != b.is_output()) return false;
    if (!a.is_output() && a.kind != b.kind) return false;
    return name(a.channel, b.channel) && name(a.object, b.object);
  }

 private:
  std::map<Name, Name> fwd_, back_;
};

class Subdivider {
 public:
  Subdivider(const SymExecution& e, std::size_t m) : e_(e), m_(m) {}

  SymExecution run() {
    SymExecution out;
    out.start = build_symmetric(e_.start.seed, m_,
                                e_.start.sigma.with_degree(m_),
                                e_.start.restricted);
    Renaming rho;
    for (const auto& c : e_.start.components)
      for (const auto& x : all_names(c)) rho.fix(x);
    for (const auto& x : e_.start.restricted) rho.fix(x);
    for (const auto& x : e_.start.sigma.support()) rho.fix(x);
    if (!search(0, out.start, rho, out.rounds))
      throw MimicFailure("no subdivision of degree " + std::to_string(m_) +
                         " follows the given execution");
    out.status = e_.status;
    return out;
  }

 private:
  bool search(std::size_t k, const SymNet& cur, const Renaming& rho,
              std::vector<Round>& rounds) {
    if (k == e_.rounds.size()) {
      if (e_.status == SymExecution::Status::Terminated)
        return symmetric_steps(cur.state(), cur.sigma).empty();
      return true;
    }
    const Round& big = e_.rounds[k];
    std::vector<NetStep> cands = symmetric_steps(cur.state(), cur.sigma);
    for (const auto& l : big.labels) {
      if (l.kind != LabelKind::FreeInput || is_unit(l.object)) continue;
      for (auto& s : symmetric_steps(cur.state(), cur.sigma, l.object))
        if (s.label.kind == LabelKind::FreeInput) cands.push_back(std::move(s));
    }
    for (const auto& first : cands) {
      Renaming r1 = rho;
      if (!matches_some(r1, first.label, big.labels)) continue;
      std::optional<Round> round;
      try {
        round = mimic_round(cur, first);
      } catch (const MimicFailure&) {
        continue;
      }
      Renaming r2 = rho;
      bool ok = true;
      for (const auto& l : round->labels)
        if (!matches_some(r2, l, big.labels)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      rounds.push_back(*round);
      if (search(k + 1, round->end, r2, rounds)) return true;
      rounds.pop_back();
    }
    return false;
  }

  static bool matches_some(Renaming& rho, const Label& l,
                           const std::vector<Label>& labels) {
    for (const auto& b : labels) {
      Renaming trial = rho;
      if (trial.label(l, b)) {
        rho = trial;
        return true;
      }
    }
    return false;
  }

  const SymExecution& e_;
  std::size_t m_;
};

}  // namespace

SymExecution subdivide(const SymExecution& e, std::size_t sub_degree) {
  const std::size_t n = e.start.degree;
  if (sub_degree == 0 || sub_degree >= n)
    throw PreconditionError("subdivision degree must lie strictly between 0 and " +
                            std::to_string(n));
  if (n % sub_degree != 0)
    throw PreconditionError("subdivision degree " + std::to_string(sub_degree) +
                            " does not divide " + std::to_string(n));
  if (!e.start.sigma.power(static_cast<long>(sub_degree)).is_identity())
    throw PreconditionError("permutation " + e.start.sigma.to_string() +
                            " is not of degree " + std::to_string(sub_degree));
  return Subdivider(e, sub_degree).run();
}

}  // namespace pisym
