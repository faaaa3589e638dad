#include "pisym/syntax.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "pisym/parser.hpp"

namespace pisym {

namespace {

void collect_free(const Process& p, NameSet& bound, NameSet& out) {
  auto add = [&](const Name& n) {
    if (!bound.count(n)) out.insert(n);
  };
  switch (p.kind()) {
    case Process::Kind::Sum:
      for (const auto& b : p.branches()) {
        const auto& g = b.guard;
        if (g.kind == GuardKind::Output) {
          add(g.channel);
          add(g.object);
          collect_free(b.cont, bound, out);
        } else if (g.kind == GuardKind::Input) {
          add(g.channel);
          if (g.binds() && !bound.count(g.object)) {
            bound.insert(g.object);
            collect_free(b.cont, bound, out);
            bound.erase(g.object);
          } else {
            collect_free(b.cont, bound, out);
          }
        } else {
          collect_free(b.cont, bound, out);
        }
      }
      break;
    case Process::Kind::Par:
      collect_free(p.left(), bound, out);
      collect_free(p.right(), bound, out);
      break;
    case Process::Kind::Restrict:
      if (bound.count(p.binder())) {
        collect_free(p.body(), bound, out);
      } else {
        bound.insert(p.binder());
        collect_free(p.body(), bound, out);
        bound.erase(p.binder());
      }
      break;
    case Process::Kind::Repl:
      collect_free(p.body(), bound, out);
      break;
    case Process::Kind::Success:
      break;
  }
}

void collect_bound(const Process& p, NameSet& out) {
  switch (p.kind()) {
    case Process::Kind::Sum:
      for (const auto& b : p.branches()) {
        if (b.guard.binds()) out.insert(b.guard.object);
        collect_bound(b.cont, out);
      }
      break;
    case Process::Kind::Par:
      collect_bound(p.left(), out);
      collect_bound(p.right(), out);
      break;
    case Process::Kind::Restrict:
      out.insert(p.binder());
      collect_bound(p.body(), out);
      break;
    case Process::Kind::Repl:
      collect_bound(p.body(), out);
      break;
    case Process::Kind::Success:
      break;
  }
}

void collect_all(const Process& p, NameSet& out) {
  switch (p.kind()) {
    case Process::Kind::Sum:
      for (const auto& b : p.branches()) {
        if (!b.guard.channel.empty()) out.insert(b.guard.channel);
        if (!b.guard.object.empty()) out.insert(b.guard.object);
        collect_all(b.cont, out);
      }
      break;
    case Process::Kind::Par:
      collect_all(p.left(), out);
      collect_all(p.right(), out);
      break;
    case Process::Kind::Restrict:
      out.insert(p.binder());
      collect_all(p.body(), out);
      break;
    case Process::Kind::Repl:
      collect_all(p.body(), out);
      break;
    case Process::Kind::Success:
      break;
  }
}

const Name& lookup(const Substitution& s, const Name& n) {
  auto it = s.find(n);
  return it == s.end() ? n : it->second;
}

bool introduces(const Substitution& s, const Name& n) {
  for (const auto& kv : s)
    if (kv.second == n) return true;
  return false;
}

Process subst_rec(const Process& p, const Substitution& s,
                  const NameSet& avoid);

// Enters the scope of binder `b`: drops b from the substitution and renames b
// when it would capture an introduced name.
std::pair<Name, Substitution> enter_binder(const Name& b, const Substitution& s,
                                           const NameSet& avoid) {
  Substitution inner = s;
  inner.erase(b);
  Name nb = b;
  if (introduces(inner, b)) {
    NameSet av = avoid;
    for (const auto& kv : inner) {
      av.insert(kv.first);
      av.insert(kv.second);
    }
    nb = fresh_name(b, av);
    inner[b] = nb;
  }
  return {nb, std::move(inner)};
}

Process subst_rec(const Process& p, const Substitution& s,
                  const NameSet& avoid) {
  if (s.empty()) return p;
  switch (p.kind()) {
    case Process::Kind::Sum: {
      std::vector<Branch> out;
      out.reserve(p.branches().size());
      for (const auto& b : p.branches()) {
        Guard g = b.guard;
        if (g.kind == GuardKind::Output) {
          g.channel = lookup(s, g.channel);
          g.object = lookup(s, g.object);
          out.push_back({g, subst_rec(b.cont, s, avoid)});
        } else if (g.kind == GuardKind::Input) {
          g.channel = lookup(s, g.channel);
          if (g.binds()) {
            auto [nb, inner] = enter_binder(g.object, s, avoid);
            g.object = nb;
            out.push_back({g, subst_rec(b.cont, inner, avoid)});
          } else {
            out.push_back({g, subst_rec(b.cont, s, avoid)});
          }
        } else {
          out.push_back({g, subst_rec(b.cont, s, avoid)});
        }
      }
      return Process::sum(std::move(out));
    }
    case Process::Kind::Par:
      return Process::par(subst_rec(p.left(), s, avoid),
                          subst_rec(p.right(), s, avoid));
    case Process::Kind::Restrict: {
      auto [nb, inner] = enter_binder(p.binder(), s, avoid);
      return Process::restrict(nb, subst_rec(p.body(), inner, avoid));
    }
    case Process::Kind::Repl:
      return Process::repl(subst_rec(p.body(), s, avoid));
    case Process::Kind::Success:
      return p;
  }
  return p;
}

// Plain renaming of every occurrence; only valid when no binder is renamed.
Process rename_all(const Process& p, const Permutation& sigma) {
  switch (p.kind()) {
    case Process::Kind::Sum: {
      std::vector<Branch> out;
      for (const auto& b : p.branches()) {
        Guard g = b.guard;
        if (!g.channel.empty()) g.channel = sigma(g.channel);
        if (g.kind == GuardKind::Output) g.object = sigma(g.object);
        out.push_back({g, rename_all(b.cont, sigma)});
      }
      return Process::sum(std::move(out));
    }
    case Process::Kind::Par:
      return Process::par(rename_all(p.left(), sigma),
                          rename_all(p.right(), sigma));
    case Process::Kind::Restrict:
      return Process::restrict(p.binder(), rename_all(p.body(), sigma));
    case Process::Kind::Repl:
      return Process::repl(rename_all(p.body(), sigma));
    case Process::Kind::Success:
      return p;
  }
  return p;
}

Process freshen_rec(const Process& p, const NameSet& targets, NameSet& avoid) {
  auto rebind = [&](const Name& b, const Process& body, Name& out_binder) {
    if (!targets.count(b)) {
      out_binder = b;
      return freshen_rec(body, targets, avoid);
    }
    out_binder = fresh_name(b, avoid);
    avoid.insert(out_binder);
    return freshen_rec(substitute(body, {{b, out_binder}}), targets, avoid);
  };
  switch (p.kind()) {
    case Process::Kind::Sum: {
      std::vector<Branch> out;
      for (const auto& b : p.branches()) {
        Guard g = b.guard;
        if (g.binds()) {
          Name nb;
          Process c = rebind(g.object, b.cont, nb);
          g.object = nb;
          out.push_back({g, c});
        } else {
          out.push_back({g, freshen_rec(b.cont, targets, avoid)});
        }
      }
      return Process::sum(std::move(out));
    }
    case Process::Kind::Par:
      return Process::par(freshen_rec(p.left(), targets, avoid),
                          freshen_rec(p.right(), targets, avoid));
    case Process::Kind::Restrict: {
      Name nb;
      Process body = rebind(p.binder(), p.body(), nb);
      return Process::restrict(nb, body);
    }
    case Process::Kind::Repl:
      return Process::repl(freshen_rec(p.body(), targets, avoid));
    case Process::Kind::Success:
      return p;
  }
  return p;
}

bool wellformed_rec(const Process& p, NameSet& scope, const NameSet& free,
                    Name* offending) {
  auto enter = [&](const Name& b, const Process& body) {
    if (free.count(b) || scope.count(b)) {
      if (offending) *offending = b;
      return false;
    }
    scope.insert(b);
    bool ok = wellformed_rec(body, scope, free, offending);
    scope.erase(b);
    return ok;
  };
  switch (p.kind()) {
    case Process::Kind::Sum:
      for (const auto& b : p.branches()) {
        bool ok = b.guard.binds()
                      ? enter(b.guard.object, b.cont)
                      : wellformed_rec(b.cont, scope, free, offending);
        if (!ok) return false;
      }
      return true;
    case Process::Kind::Par:
      return wellformed_rec(p.left(), scope, free, offending) &&
             wellformed_rec(p.right(), scope, free, offending);
    case Process::Kind::Restrict:
      return enter(p.binder(), p.body());
    case Process::Kind::Repl:
      return wellformed_rec(p.body(), scope, free, offending);
    case Process::Kind::Success:
      return true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical forms.
//
// A region is a maximal tree of Par and Restrict nodes; its leaves are sums,
// replications and success markers. All restrictions of a region float to its
// root. Region binders get level names (prefix + depth); parallel children are
// ordered by their text; ties between restricted names with the same
// signature are resolved by trying every ordering within the tie group. A last
// pass renames every binder to a unique pre-order index.

constexpr char kTempMark = '\x01';
constexpr std::size_t kMaxOrderings = 5040;

class Canonicalizer {
 public:
  explicit Canonicalizer(std::string prefix) : prefix_(std::move(prefix)) {}

  using Env = std::map<Name, Name>;

  Process region(const Process& p, const Env& env, std::size_t level) {
    std::vector<Node> nodes;
    std::vector<Name> temps;
    const std::size_t root = collect(p, env, nodes, temps);
    const std::size_t k = temps.size();
    if (k == 0) return eval(nodes, root, {}, level).first;

    std::vector<std::pair<std::string, Name>> sigs;
    for (const auto& t : temps) {
      Env asg;
      for (const auto& u : temps) asg[u] = u == t ? "\x02@" : "\x02#";
      sigs.emplace_back(eval(nodes, root, asg, level + k).second, t);
    }
    std::sort(sigs.begin(), sigs.end());
    std::vector<std::vector<Name>> groups;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      if (i == 0 || sigs[i].first != sigs[i - 1].first) groups.emplace_back();
      groups.back().push_back(sigs[i].second);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());

    std::size_t budget = kMaxOrderings;
    std::optional<std::pair<Process, std::string>> best;
    std::vector<Name> order;
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (budget == 0) return;
      if (gi == groups.size()) {
        --budget;
        Env asg;
        for (std::size_t i = 0; i < order.size(); ++i)
          asg[order[i]] = level_name(level + i);
        auto cand = eval(nodes, root, asg, level + k);
        if (!best || cand.second < best->second) best = std::move(cand);
        return;
      }
      auto g = groups[gi];
      do {
        for (const auto& n : g) order.push_back(n);
        rec(gi + 1);
        order.resize(order.size() - g.size());
      } while (budget > 0 && std::next_permutation(g.begin(), g.end()));
    };
    rec(0);

    Process out = best->first;
    for (std::size_t i = k; i-- > 0;)
      out = Process::restrict(level_name(level + i), out);
    return out;
  }

  Name level_name(std::size_t level) const {
    return prefix_ + std::to_string(level);
  }

 private:
  struct Node {
    bool leaf = false;
    Process proc;
    Env env;
    std::size_t l = 0, r = 0;
  };

  std::size_t collect(const Process& p, const Env& env, std::vector<Node>& nodes,
                      std::vector<Name>& temps) {
    if (p.kind() == Process::Kind::Par) {
      const std::size_t l = collect(p.left(), env, nodes, temps);
      const std::size_t r = collect(p.right(), env, nodes, temps);
      nodes.push_back(Node{false, {}, {}, l, r});
      return nodes.size() - 1;
    }
    if (p.kind() == Process::Kind::Restrict) {
      Name t = std::string(1, kTempMark) + std::to_string(temp_counter_++);
      temps.push_back(t);
      Env inner = env;
      inner[p.binder()] = t;
      return collect(p.body(), inner, nodes, temps);
    }
    nodes.push_back(Node{true, p, env, 0, 0});
    return nodes.size() - 1;
  }

  std::pair<Process, std::string> eval(const std::vector<Node>& nodes,
                                       std::size_t i, const Env& asg,
                                       std::size_t level) {
    const Node& n = nodes[i];
    if (n.leaf) {
      Env env = n.env;
      for (auto& kv : env) {
        if (!kv.second.empty() && kv.second[0] == kTempMark) {
          auto it = asg.find(kv.second);
          if (it != asg.end()) kv.second = it->second;
        }
      }
      Process c = leaf(n.proc, env, level);
      return {c, format(c)};
    }
    auto a = eval(nodes, n.l, asg, level);
    auto b = eval(nodes, n.r, asg, level);
    if (b.second < a.second) std::swap(a, b);
    std::string key = "(" + a.second + " | " + b.second + ")";
    return {Process::par(std::move(a.first), std::move(b.first)),
            std::move(key)};
  }

  static const Name& look(const Env& env, const Name& n) {
    auto it = env.find(n);
    return it == env.end() ? n : it->second;
  }

  Process leaf(const Process& p, const Env& env, std::size_t level) {
    switch (p.kind()) {
      case Process::Kind::Success:
        return p;
      case Process::Kind::Repl:
        return Process::repl(region(p.body(), env, level));
      case Process::Kind::Sum: {
        std::vector<Branch> out;
        for (const auto& b : p.branches()) {
          Guard g = b.guard;
          if (g.kind == GuardKind::Output) {
            g.channel = look(env, g.channel);
            g.object = look(env, g.object);
            out.push_back({g, region(b.cont, env, level)});
          } else if (g.kind == GuardKind::Input) {
            g.channel = look(env, g.channel);
            if (g.binds()) {
              Env inner = env;
              inner[g.object] = level_name(level);
              g.object = level_name(level);
              out.push_back({g, region(b.cont, inner, level + 1)});
            } else {
              out.push_back({g, region(b.cont, env, level)});
            }
          } else {
            out.push_back({g, region(b.cont, env, level)});
          }
        }
        return Process::sum(std::move(out));
      }
      default:
        return p;  // Par / Restrict never reach a leaf
    }
  }

  std::string prefix_;
  std::size_t temp_counter_ = 0;
};

// Renames binders to prefix + pre-order index.
Process number_binders(const Process& p, std::map<Name, Name>& env,
                       const std::string& prefix, std::size_t& counter) {
  auto bind = [&](const Name& b, const Process& body, Name& nb) {
    nb = prefix + std::to_string(counter++);
    auto saved = env.find(b) == env.end() ? std::optional<Name>{}
                                          : std::optional<Name>{env[b]};
    env[b] = nb;
    Process r = number_binders(body, env, prefix, counter);
    if (saved)
      env[b] = *saved;
    else
      env.erase(b);
    return r;
  };
  auto look = [&](const Name& n) -> Name {
    auto it = env.find(n);
    return it == env.end() ? n : it->second;
  };
  switch (p.kind()) {
    case Process::Kind::Sum: {
      std::vector<Branch> out;
      for (const auto& b : p.branches()) {
        Guard g = b.guard;
        if (!g.channel.empty()) g.channel = look(g.channel);
        if (g.kind == GuardKind::Output) {
          g.object = look(g.object);
          out.push_back({g, number_binders(b.cont, env, prefix, counter)});
        } else if (g.binds()) {
          Name nb;
          Process c = bind(g.object, b.cont, nb);
          g.object = nb;
          out.push_back({g, c});
        } else {
          out.push_back({g, number_binders(b.cont, env, prefix, counter)});
        }
      }
      return Process::sum(std::move(out));
    }
    case Process::Kind::Par: {
      Process l = number_binders(p.left(), env, prefix, counter);
      Process r = number_binders(p.right(), env, prefix, counter);
      return Process::par(l, r);
    }
    case Process::Kind::Restrict: {
      Name nb;
      Process body = bind(p.binder(), p.body(), nb);
      return Process::restrict(nb, body);
    }
    case Process::Kind::Repl:
      return Process::repl(number_binders(p.body(), env, prefix, counter));
    case Process::Kind::Success:
      return p;
  }
  return p;
}

std::string canonical_prefix(const Process& p) {
  std::size_t most = 0;
  for (const auto& n : free_names(p)) {
    std::size_t u = 0;
    while (u < n.size() && n[u] == '_') ++u;
    most = std::max(most, u);
  }
  return std::string(most + 1, '_');
}

}  // namespace

NameSet free_names_with_unit(const Process& p) {
  NameSet bound, out;
  collect_free(p, bound, out);
  return out;
}

NameSet free_names(const Process& p) {
  NameSet out = free_names_with_unit(p);
  out.erase(kUnit);
  return out;
}

NameSet bound_names(const Process& p) {
  NameSet out;
  collect_bound(p, out);
  return out;
}

NameSet all_names(const Process& p) {
  NameSet out;
  collect_all(p, out);
  return out;
}

bool occurs_free(const Process& p, const Name& n) {
  return free_names_with_unit(p).count(n) > 0;
}

Process substitute(const Process& p, const Substitution& s) {
  Substitution eff;
  for (const auto& kv : s)
    if (kv.first != kv.second) eff.insert(kv);
  if (eff.empty()) return p;
  return subst_rec(p, eff, all_names(p));
}

Process apply_perm(const Permutation& sigma, const Process& p) {
  if (sigma.is_identity()) return p;
  const NameSet bn = bound_names(p);
  for (const auto& n : sigma.support())
    if (bn.count(n))
      throw PreconditionError("permutation " + sigma.to_string() +
                              " moves bound name " + n);
  return rename_all(p, sigma);
}

Process freshen(const Process& p, const NameSet& avoid) {
  NameSet av = all_names(p);
  av.insert(avoid.begin(), avoid.end());
  return freshen_rec(p, avoid, av);
}

bool is_separate(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Sum: {
      bool in = false, out = false;
      for (const auto& b : p.branches()) {
        in |= b.guard.kind == GuardKind::Input;
        out |= b.guard.kind == GuardKind::Output;
        if (!is_separate(b.cont)) return false;
      }
      return !(in && out);
    }
    case Process::Kind::Par:
      return is_separate(p.left()) && is_separate(p.right());
    case Process::Kind::Restrict:
    case Process::Kind::Repl:
      return is_separate(p.body());
    case Process::Kind::Success:
      return true;
  }
  return true;
}

bool is_wellformed(const Process& p, Name* offending) {
  NameSet scope;
  return wellformed_rec(p, scope, free_names_with_unit(p), offending);
}

Process canonicalize(const Process& p) {
  const std::string prefix = canonical_prefix(p);
  Canonicalizer c(prefix);
  Process leveled = c.region(p, {}, 0);
  std::map<Name, Name> env;
  std::size_t counter = 0;
  return number_binders(leveled, env, prefix, counter);
}

bool congruent(const Process& p, const Process& q) {
  if (p == q) return true;
  return canonicalize(p) == canonicalize(q);
}

std::pair<std::vector<Name>, Process> split_restrictions(const Process& p) {
  std::vector<Name> names;
  Process cur = p;
  while (cur.kind() == Process::Kind::Restrict) {
    names.push_back(cur.binder());
    cur = cur.body();
  }
  return {names, cur};
}

bool is_canonical_binder(const Name& n) {
  std::size_t i = 0;
  while (i < n.size() && n[i] == '_') ++i;
  if (i == 0 || i == n.size()) return false;
  return std::all_of(n.begin() + static_cast<long>(i), n.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

bool has_top_level_success(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Success:
      return true;
    case Process::Kind::Par:
      return has_top_level_success(p.left()) ||
             has_top_level_success(p.right());
    case Process::Kind::Restrict:
      return has_top_level_success(p.body());
    default:
      return false;
  }
}

Process drop_vacuous_restrictions(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Sum: {
      std::vector<Branch> out;
      for (const auto& b : p.branches())
        out.push_back({b.guard, drop_vacuous_restrictions(b.cont)});
      return Process::sum(std::move(out));
    }
    case Process::Kind::Par:
      return Process::par(drop_vacuous_restrictions(p.left()),
                          drop_vacuous_restrictions(p.right()));
    case Process::Kind::Restrict: {
      Process body = drop_vacuous_restrictions(p.body());
      if (!occurs_free(body, p.binder())) return body;
      return Process::restrict(p.binder(), body);
    }
    case Process::Kind::Repl:
      return Process::repl(drop_vacuous_restrictions(p.body()));
    case Process::Kind::Success:
      return p;
  }
  return p;
}

}  // namespace pisym
