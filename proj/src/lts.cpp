#include "pisym/lts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

NameSet Label::names() const {
  NameSet s;
  if (!is_unit(channel)) s.insert(channel);
  if (!is_unit(object)) s.insert(object);
  return s;
}

NameSet Label::free_names() const {
  NameSet s = names();
  if (kind == LabelKind::BoundOutput) s.erase(object);
  return s;
}

NameSet Label::bound_names() const {
  if (kind == LabelKind::BoundOutput && !is_unit(object)) return {object};
  return {};
}

Label Label::unbound() const {
  if (kind != LabelKind::BoundOutput) return *this;
  return output(channel, object);
}

std::string Label::to_string() const {
  switch (kind) {
    case LabelKind::Tau:
      return "tau";
    case LabelKind::FreeInput:
      return quote_name(channel) + "?" + (is_unit(object) ? "" : quote_name(object));
    case LabelKind::FreeOutput:
      return quote_name(channel) + "!" + (is_unit(object) ? "" : quote_name(object));
    case LabelKind::BoundOutput:
      return quote_name(channel) + "!(" + quote_name(object) + ")";
  }
  return {};
}

const char* kind_name(LabelKind k) {
  switch (k) {
    case LabelKind::Tau:
      return "tau";
    case LabelKind::FreeInput:
      return "input";
    case LabelKind::FreeOutput:
      return "output";
    case LabelKind::BoundOutput:
      return "bound-output";
  }
  return "";
}

Label label_perm(const Permutation& sigma, const Label& l) {
  if (l.is_tau()) return l;
  return {l.kind, sigma(l.channel), sigma(l.object)};
}

// ---------------------------------------------------------------------------

namespace {

using CK = Commitment::Kind;

Commitment out_commit(Name ch, Name obj, bool bound, Process r) {
  Commitment c;
  c.kind = CK::Output;
  c.channel = std::move(ch);
  c.object = std::move(obj);
  c.bound = bound;
  c.residue = std::move(r);
  return c;
}

Commitment tau_commit(Process r) {
  Commitment c;
  c.kind = CK::Tau;
  c.residue = std::move(r);
  return c;
}

Commitment in_commit(Name ch, Name binder,
                     std::function<Process(const Name&)> recv) {
  Commitment c;
  c.kind = CK::Input;
  c.channel = std::move(ch);
  c.object = std::move(binder);
  c.receive = std::move(recv);
  return c;
}

// An object-free input only meets an object-free output; a binding input
// only meets a proper name.
bool sorts_match(const Commitment& out, const Commitment& in) {
  return is_unit(out.object) == is_unit(in.object);
}

// Renames the extruded name of a process-level bound output when it also
// occurs in `others`.
Commitment separate_extruded(Commitment c, const NameSet& others) {
  if (!c.bound || !others.count(c.object)) return c;
  NameSet avoid = others;
  NameSet own = all_names(c.residue);
  avoid.insert(own.begin(), own.end());
  Name fresh = fresh_name(c.object, avoid);
  c.residue = substitute(c.residue, {{c.object, fresh}});
  c.object = fresh;
  return c;
}

void lift_par(const std::vector<Commitment>& cs, const Process& sibling,
              bool left, std::vector<Commitment>& out) {
  auto wrap = [left, sibling](const Process& r) {
    return left ? Process::par(r, sibling) : Process::par(sibling, r);
  };
  const NameSet sib = all_names(sibling);
  for (const auto& c0 : cs) {
    switch (c0.kind) {
      case CK::Tau:
        out.push_back(tau_commit(wrap(c0.residue)));
        break;
      case CK::Output: {
        Commitment c = separate_extruded(c0, sib);
        c.residue = wrap(c.residue);
        out.push_back(std::move(c));
        break;
      }
      case CK::Input: {
        auto recv = c0.receive;
        out.push_back(in_commit(c0.channel, c0.object,
                                [recv, wrap](const Name& y) {
                                  return wrap(recv(y));
                                }));
        break;
      }
    }
  }
}

// Communication of an output of one side with an input of the other.
// `assemble` places the two residues back into their positions.
void internal_comms(const std::vector<Commitment>& outs,
                    const std::vector<Commitment>& ins, const Process& receiver,
                    const std::function<Process(const Process&, const Process&)>&
                        assemble,
                    std::vector<Commitment>& result) {
  const NameSet rnames = all_names(receiver);
  for (const auto& o0 : outs) {
    if (o0.kind != CK::Output) continue;
    for (const auto& i : ins) {
      if (i.kind != CK::Input || i.channel != o0.channel) continue;
      if (!sorts_match(o0, i)) continue;
      if (!o0.bound) {
        result.push_back(tau_commit(assemble(o0.residue, i.receive(o0.object))));
        continue;
      }
      Commitment o = separate_extruded(o0, rnames);
      result.push_back(tau_commit(Process::restrict(
          o.object, assemble(o.residue, i.receive(o.object)))));
    }
  }
}

std::vector<Commitment> sum_commitments(const Process& p) {
  std::vector<Commitment> out;
  for (const auto& b : p.branches()) {
    const Guard& g = b.guard;
    switch (g.kind) {
      case GuardKind::Tau:
        out.push_back(tau_commit(b.cont));
        break;
      case GuardKind::Output:
        out.push_back(out_commit(g.channel, g.object, false, b.cont));
        break;
      case GuardKind::Input: {
        if (!g.binds()) {
          Process cont = b.cont;
          out.push_back(in_commit(g.channel, kUnit,
                                  [cont](const Name&) { return cont; }));
        } else {
          Process cont = b.cont;
          Name z = g.object;
          out.push_back(in_commit(g.channel, z, [cont, z](const Name& y) {
            return substitute(cont, {{z, y}});
          }));
        }
        break;
      }
    }
  }
  return out;
}

std::vector<Commitment> restrict_commitments(const Process& p) {
  const Name z = p.binder();
  const Process body = p.body();
  std::vector<Commitment> inner = commitments(body);
  std::vector<Commitment> out;
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const auto& c = inner[k];
    switch (c.kind) {
      case CK::Tau:
        out.push_back(tau_commit(Process::restrict(z, c.residue)));
        break;
      case CK::Output:
        if (c.channel == z) break;
        if (!c.bound && c.object == z) {
          out.push_back(out_commit(c.channel, z, true, c.residue));
        } else {
          out.push_back(out_commit(c.channel, c.object, c.bound,
                                   Process::restrict(z, c.residue)));
        }
        break;
      case CK::Input: {
        if (c.channel == z) break;
        auto recv = c.receive;
        out.push_back(in_commit(
            c.channel, c.object, [recv, z, body, k](const Name& y) {
              if (y != z) return Process::restrict(z, recv(y));
              // The received name is a different z: rename the binder first.
              NameSet avoid = all_names(body);
              avoid.insert(y);
              Name z2 = fresh_name(z, avoid);
              Process body2 = substitute(body, {{z, z2}});
              std::size_t idx = 0;
              for (const auto& c2 : commitments(body2)) {
                if (idx++ == k) return Process::restrict(z2, c2.receive(y));
              }
              return Process::restrict(z2, body2);  // unreachable
            }));
        break;
      }
    }
  }
  return out;
}

std::vector<Commitment> repl_commitments(const Process& p) {
  const Process body = p.body();
  const std::vector<Commitment> single = commitments(body);
  std::vector<Commitment> out;
  // One copy acts: B | !B.
  lift_par(single, p, /*left=*/true, out);
  // Two copies talk: B' | (B'' | !B).
  internal_comms(single, single, body,
                 [&p](const Process& a, const Process& b) {
                   return Process::par(a, Process::par(b, p));
                 },
                 out);
  return out;
}

}  // namespace

std::vector<Commitment> commitments(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Sum:
      return sum_commitments(p);
    case Process::Kind::Par: {
      const auto cl = commitments(p.left());
      const auto cr = commitments(p.right());
      std::vector<Commitment> out;
      lift_par(cl, p.right(), true, out);
      lift_par(cr, p.left(), false, out);
      internal_comms(cl, cr, p.right(),
                     [](const Process& a, const Process& b) {
                       return Process::par(a, b);
                     },
                     out);
      internal_comms(cr, cl, p.left(),
                     [](const Process& a, const Process& b) {
                       return Process::par(b, a);
                     },
                     out);
      return out;
    }
    case Process::Kind::Restrict:
      return restrict_commitments(p);
    case Process::Kind::Repl:
      return repl_commitments(p);
    case Process::Kind::Success:
      return {};
  }
  return {};
}

// ---------------------------------------------------------------------------

Process NetState::flatten() const {
  Process body;
  if (!components.empty()) {
    body = components.back();
    for (std::size_t i = components.size() - 1; i-- > 0;)
      body = Process::par(components[i], body);
  }
  for (auto it = restricted.rbegin(); it != restricted.rend(); ++it)
    body = Process::restrict(*it, body);
  return body;
}

NetState as_network(const Process& p) {
  NetState s;
  Process cur = p;
  while (cur.kind() == Process::Kind::Restrict) {
    s.restricted.push_back(cur.binder());
    cur = cur.body();
  }
  while (cur.kind() == Process::Kind::Par) {
    s.components.push_back(cur.left());
    cur = cur.right();
  }
  s.components.push_back(cur);
  return s;
}

Name fresh_input_name(const NetState& s, const NameSet& universe,
                      const NameSet& avoid) {
  NameSet used = universe;
  used.insert(avoid.begin(), avoid.end());
  used.insert(s.restricted.begin(), s.restricted.end());
  for (const auto& c : s.components) {
    NameSet a = all_names(c);
    used.insert(a.begin(), a.end());
  }
  return fresh_or_same("c", used);
}

std::vector<NetStep> net_steps(const NetState& s, const NameSet& universe,
                               const NameSet& avoid) {
  const std::size_t n = s.components.size();
  const NameSet restricted(s.restricted.begin(), s.restricted.end());
  std::vector<std::vector<Commitment>> cs(n);
  std::vector<NameSet> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    cs[i] = commitments(s.components[i]);
    names[i] = all_names(s.components[i]);
  }
  NameSet outside = universe;
  outside.insert(avoid.begin(), avoid.end());
  outside.insert(restricted.begin(), restricted.end());
  auto others = [&](std::size_t i) {
    NameSet o = outside;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) o.insert(names[j].begin(), names[j].end());
    return o;
  };
  const Name fresh = fresh_input_name(s, universe, avoid);
  std::vector<Name> input_objects;
  for (const auto& y : universe)
    if (!is_unit(y) && !restricted.count(y)) input_objects.push_back(y);
  if (!std::count(input_objects.begin(), input_objects.end(), fresh))
    input_objects.push_back(fresh);

  std::vector<NetStep> out;
  auto single = [&](std::size_t i, Label l, Process r,
                    std::vector<Name> res) {
    NetStep st;
    st.label = std::move(l);
    st.participants = {i};
    st.target.restricted = std::move(res);
    st.target.components = s.components;
    st.target.components[i] = std::move(r);
    out.push_back(std::move(st));
  };

  for (std::size_t i = 0; i < n; ++i) {
    const NameSet oth = others(i);
    for (const auto& c : cs[i]) {
      switch (c.kind) {
        case CK::Tau:
          single(i, Label::tau(), c.residue, s.restricted);
          break;
        case CK::Output: {
          if (restricted.count(c.channel)) break;
          if (c.bound) {
            Commitment c2 = separate_extruded(c, oth);
            single(i, Label::bound_output(c.channel, c2.object), c2.residue,
                   s.restricted);
          } else if (restricted.count(c.object)) {
            std::vector<Name> res;
            for (const auto& r : s.restricted)
              if (r != c.object) res.push_back(r);
            single(i, Label::bound_output(c.channel, c.object), c.residue,
                   std::move(res));
          } else {
            single(i, Label::output(c.channel, c.object), c.residue,
                   s.restricted);
          }
          break;
        }
        case CK::Input: {
          if (restricted.count(c.channel)) break;
          if (is_unit(c.object)) {
            single(i, Label::input(c.channel, kUnit), c.receive(kUnit),
                   s.restricted);
            break;
          }
          for (const auto& y : input_objects)
            single(i, Label::input(c.channel, y), c.receive(y), s.restricted);
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const NameSet oth = others(i);
    for (const auto& o0 : cs[i]) {
      if (o0.kind != CK::Output) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (const auto& in : cs[j]) {
          if (in.kind != CK::Input || in.channel != o0.channel) continue;
          if (!sorts_match(o0, in)) continue;
          NetStep st;
          st.label = Label::tau();
          st.participants = {std::min(i, j), std::max(i, j)};
          st.sender = i;
          st.receiver = j;
          st.sync_channel = o0.channel;
          st.target.restricted = s.restricted;
          st.target.components = s.components;
          if (o0.bound) {
            Commitment o = separate_extruded(o0, oth);
            st.sync_object = o.object;
            st.target.components[i] = o.residue;
            st.target.components[j] = in.receive(o.object);
            st.target.restricted.push_back(o.object);
          } else {
            st.sync_object = o0.object;
            st.target.components[i] = o0.residue;
            st.target.components[j] = in.receive(o0.object);
          }
          out.push_back(std::move(st));
        }
      }
    }
  }

  std::vector<std::pair<std::string, NetStep>> keyed;
  keyed.reserve(out.size());
  for (auto& st : out) keyed.emplace_back(format(st.target.flatten()), std::move(st));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.label, a.second.participants, a.second.sender,
                    a.first) < std::tie(b.second.label, b.second.participants,
                                        b.second.sender, b.first);
  });
  std::vector<NetStep> sorted;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    auto& st = keyed[k].second;
    if (k > 0 && keyed[k].first == keyed[k - 1].first &&
        st.label == sorted.back().label &&
        st.participants == sorted.back().participants &&
        st.sender == sorted.back().sender)
      continue;
    sorted.push_back(std::move(st));
  }
  return sorted;
}

// ---------------------------------------------------------------------------

std::vector<Step> raw_transitions(const Process& p, const NameSet& universe) {
  std::vector<Step> out;
  for (auto& st : net_steps(as_network(p), universe))
    out.push_back({st.label, st.participants, st.sender, st.target.flatten()});
  return out;
}

std::vector<Step> transitions(const Process& p, const NameSet& universe) {
  std::vector<std::pair<std::string, Step>> keyed;
  for (auto& st : raw_transitions(p, universe)) {
    st.target = canonicalize(st.target);
    keyed.emplace_back(format(st.target), std::move(st));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.label, a.second.participants, a.second.sender,
                    a.first) < std::tie(b.second.label, b.second.participants,
                                        b.second.sender, b.first);
  });
  std::vector<Step> out;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    auto& st = keyed[k].second;
    if (k > 0 && keyed[k].first == keyed[k - 1].first &&
        st.label == out.back().label &&
        st.participants == out.back().participants &&
        st.sender == out.back().sender)
      continue;
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<Step> tau_transitions(const Process& p) {
  std::vector<Step> out;
  for (auto& st : transitions(p, free_names(p)))
    if (st.label.is_tau()) out.push_back(std::move(st));
  return out;
}

namespace {

struct Explorer {
  std::size_t depth;
  bool tau_only;
  bool modulo;
  ExecutionSet result;
  std::set<std::vector<std::string>> seen;
  std::vector<Step> path;
  Process start;

  std::vector<Step> successors(const Process& p) {
    if (tau_only) {
      std::vector<Step> out;
      auto all = modulo ? transitions(p, free_names(p))
                        : raw_transitions(p, free_names(p));
      for (auto& st : all)
        if (st.label.is_tau()) out.push_back(std::move(st));
      return out;
    }
    return modulo ? transitions(p, free_names(p))
                  : raw_transitions(p, free_names(p));
  }

  void emit(bool truncated) {
    if (modulo) {
      std::vector<std::string> key;
      for (const auto& st : path) {
        key.push_back(st.label.to_string());
        key.push_back(format(st.target));
      }
      key.push_back(truncated ? "+" : ".");
      if (!seen.insert(key).second) return;
    }
    result.traces.push_back({start, path, truncated});
    result.truncated |= truncated;
  }

  void run(const Process& p) {
    auto succ = successors(p);
    if (succ.empty()) {
      emit(false);
      return;
    }
    if (path.size() >= depth) {
      emit(true);
      return;
    }
    for (auto& st : succ) {
      Process next = st.target;
      path.push_back(std::move(st));
      run(next);
      path.pop_back();
    }
  }
};

}  // namespace

ExecutionSet max_executions(const Process& p, std::size_t depth, bool tau_only,
                            bool modulo_congruence) {
  Explorer ex{depth, tau_only, modulo_congruence, {}, {}, {}, p};
  ex.run(modulo_congruence ? canonicalize(p) : p);
  return std::move(ex.result);
}

}  // namespace pisym
