#include "pisym/symmetry.hpp"

#include <algorithm>
#include <map>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

SymNet build_symmetric(const Process& seed, std::size_t n,
                       const Permutation& sigma,
                       const std::vector<Name>& restricted) {
  using C = SymmetryError::Code;
  if (n == 0) throw SymmetryError(C::WrongDegree, "degree must be at least 1");
  if (!sigma.power(static_cast<long>(n)).is_identity())
    throw SymmetryError(C::WrongDegree, "permutation " + sigma.to_string() +
                                            " is not of degree " +
                                            std::to_string(n));
  const NameSet fn = free_names(seed);
  NameSet seen;
  for (const auto& x : restricted) {
    if (!fn.count(x))
      throw SymmetryError(C::NotFreeName, "restricted name " + quote_name(x) +
                                              " is not free in the seed");
    if (!seen.insert(x).second)
      throw SymmetryError(C::DuplicateName,
                          "restricted name " + quote_name(x) + " listed twice");
  }
  for (const auto& x : restricted)
    if (!seen.count(sigma(x)))
      throw SymmetryError(C::NotClosed, "restricted names are not closed under " +
                                            sigma.to_string() + ": " +
                                            quote_name(x) + " maps to " +
                                            quote_name(sigma(x)));
  const NameSet bn = bound_names(seed);
  for (const auto& x : sigma.support())
    if (bn.count(x))
      throw SymmetryError(C::MovesBoundName,
                          "permutation moves bound name " + quote_name(x));

  SymNet net;
  net.seed = seed;
  net.degree = n;
  net.restricted = restricted;
  net.sigma = sigma.with_degree(n);
  Permutation power = Permutation::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    net.components.push_back(apply_perm(power, seed));
    power = net.sigma.compose(power);
  }
  return net;
}

Recognition recognize_symmetric(const NetState& net, const Permutation& sigma) {
  Recognition r;
  const std::size_t n = net.components.size();
  if (n == 0) {
    r.reason = "network has no components";
    return r;
  }
  if (!sigma.power(static_cast<long>(n)).is_identity()) {
    r.reason = "permutation is not of degree " + std::to_string(n);
    return r;
  }
  const NameSet restricted(net.restricted.begin(), net.restricted.end());
  for (const auto& x : net.restricted) {
    if (!restricted.count(sigma(x))) {
      r.reason = "restricted names not closed under " + sigma.to_string();
      return r;
    }
  }
  const Process& p = net.components[0];
  const NameSet bn = bound_names(p);
  for (const auto& x : sigma.support()) {
    if (bn.count(x)) {
      r.reason = "permutation moves bound name " + quote_name(x);
      return r;
    }
  }
  Permutation power = sigma;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(apply_perm(power, p) == net.components[i])) {
      r.index = i;
      r.reason = "component " + std::to_string(i) + " is not " +
                 sigma.to_string() + "^" + std::to_string(i) +
                 " of component 0";
      return r;
    }
    power = sigma.compose(power);
  }
  r.seed = p;
  return r;
}

std::optional<SymNet> as_symmetric(const NetState& net,
                                   const Permutation& sigma) {
  auto r = recognize_symmetric(net, sigma);
  if (!r) return std::nullopt;
  SymNet s;
  s.seed = *r.seed;
  s.degree = net.components.size();
  s.restricted = net.restricted;
  s.sigma = sigma.with_degree(s.degree);
  s.components = net.components;
  return s;
}

NetState indexed_substitute(
    const NetState& net,
    const std::vector<std::pair<std::size_t, Process>>& bindings) {
  NetState out = net;
  std::vector<bool> used(net.components.size(), false);
  for (const auto& [i, q] : bindings) {
    if (i >= net.components.size())
      throw PreconditionError("index " + std::to_string(i) +
                              " out of range for a network of " +
                              std::to_string(net.components.size()));
    if (used[i])
      throw PreconditionError("index " + std::to_string(i) + " bound twice");
    used[i] = true;
    out.components[i] = q;
  }
  return out;
}

NetState indexed_substitute(
    const SymNet& net,
    const std::vector<std::pair<std::size_t, Process>>& bindings) {
  return indexed_substitute(net.state(), bindings);
}

std::vector<Label> symmetric_label_sequence(const Label& mu, std::size_t n,
                                            const Permutation& sigma,
                                            const std::vector<Name>& scope) {
  std::vector<Label> out{mu};
  const NameSet in_scope(scope.begin(), scope.end());
  for (std::size_t i = 2; i <= n; ++i) {
    const Permutation s = sigma.power(static_cast<long>(i - 1));
    switch (mu.kind) {
      case LabelKind::Tau:
        out.push_back(mu);
        break;
      case LabelKind::FreeInput:
        out.push_back(Label::input(s(mu.channel), mu.object));
        break;
      case LabelKind::FreeOutput:
        out.push_back(Label::output(s(mu.channel), s(mu.object)));
        break;
      case LabelKind::BoundOutput: {
        // Bound again only if this image has not been sent before.
        NameSet earlier;
        Name b = mu.object;
        for (std::size_t k = 0; k + 1 < i; ++k) {
          earlier.insert(b);
          b = sigma(b);
        }
        const Name image = s(mu.object);
        if (in_scope.count(image) && !earlier.count(image))
          out.push_back(Label::bound_output(s(mu.channel), image));
        else
          out.push_back(Label::output(s(mu.channel), image));
        break;
      }
    }
  }
  return out;
}

namespace {

class Matcher {
 public:
  explicit Matcher(const Permutation& base)
      : base_(base), moved_(base.support()) {}

  bool bind(const Name& a, const Name& b) {
    if (is_unit(a) || is_unit(b)) return is_unit(a) && is_unit(b);
    if (moved_.count(a) || moved_.count(b))
      if (base_(a) != b) return false;
    auto [it, fresh] = map_.emplace(a, b);
    return fresh || it->second == b;
  }

  bool same_binder(const Name& a, const Name& b) {
    return a == b && bind(a, b);
  }

  bool match(const Process& p, const Process& q) {
    if (p.kind() != q.kind()) return false;
    switch (p.kind()) {
      case Process::Kind::Sum: {
        const auto& bp = p.branches();
        const auto& bq = q.branches();
        if (bp.size() != bq.size()) return false;
        for (std::size_t i = 0; i < bp.size(); ++i) {
          const Guard& g = bp[i].guard;
          const Guard& h = bq[i].guard;
          if (g.kind != h.kind) return false;
          if (g.kind == GuardKind::Input) {
            if (!bind(g.channel, h.channel)) return false;
            if (g.binds() != h.binds()) return false;
            if (g.binds() && !same_binder(g.object, h.object)) return false;
          } else if (g.kind == GuardKind::Output) {
            if (!bind(g.channel, h.channel) || !bind(g.object, h.object))
              return false;
          }
          if (!match(bp[i].cont, bq[i].cont)) return false;
        }
        return true;
      }
      case Process::Kind::Par:
        return match(p.left(), q.left()) && match(p.right(), q.right());
      case Process::Kind::Restrict:
        return same_binder(p.binder(), q.binder()) && match(p.body(), q.body());
      case Process::Kind::Repl:
        return match(p.body(), q.body());
      case Process::Kind::Success:
        return true;
    }
    return false;
  }

  std::optional<Permutation> result(std::size_t n) const {
    std::map<Name, Name> m = base_.mapping();
    for (const auto& [a, b] : map_) {
      auto it = m.find(a);
      if (it != m.end() && it->second != b) return std::nullopt;
      m[a] = b;
    }
    try {
      return Permutation(m, n);
    } catch (const PermutationError&) {
      return std::nullopt;
    }
  }

 private:
  const Permutation& base_;
  NameSet moved_;
  std::map<Name, Name> map_;
};

}  // namespace

std::optional<Permutation> infer_symmetry(const NetState& net,
                                          const Permutation& base,
                                          const std::vector<Label>& labels) {
  const std::size_t n = net.components.size();
  if (n == 0) return std::nullopt;
  Matcher m(base);
  for (std::size_t i = 0; i < n; ++i)
    if (!m.match(net.components[i], net.components[(i + 1) % n]))
      return std::nullopt;
  // A full round also wraps around: sigma of the last label is the first.
  const std::size_t pairs = labels.size() == n ? n : labels.size() - (labels.empty() ? 0 : 1);
  for (std::size_t j = 0; j < pairs; ++j) {
    const Label& a = labels[j];
    const Label& b = labels[(j + 1) % labels.size()];
    if (a.is_tau() || b.is_tau()) continue;
    if (!m.bind(a.channel, b.channel)) return std::nullopt;
    if (a.is_output() && b.is_output() && !m.bind(a.object, b.object))
      return std::nullopt;
  }
  auto sigma = m.result(n);
  if (!sigma || !recognize_symmetric(net, *sigma)) return std::nullopt;
  return sigma;
}

}  // namespace pisym
