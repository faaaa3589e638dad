#pragma once

// Random terms for the property suites.
//
// Sorts keep every generated term well-sorted: a, b, c carry a name, d, u and
// every bound name carry the unit. So only d, u and bound names are sent.

#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pisym/process.hpp"
#include "pisym/permutation.hpp"
#include "pisym/symmetry.hpp"
#include "pisym/syntax.hpp"

namespace pisym::gen {

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20261016) {
  if (const char* s = std::getenv("PISYM_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

struct Options {
  bool separate = true;
  bool replication = false;
  bool restriction = true;      // process-level new
  bool force_extrusion = false; // start with new r in (ch!r. ...)
  int prefixes = 6;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[uniform(0, int(v.size()) - 1)]; }

  Process process(const Options& o) {
    opts_ = o;
    left_ = o.prefixes;
    next_ = 0;
    if (o.force_extrusion) {
      const Name r = "r" + std::to_string(next_++);
      --left_;
      Process body = Process::prefix(Guard::output(pick(kCarry), r), term(1, {r}));
      if (chance(0.5)) body = Process::par(body, term(1, {r}));
      return Process::restrict(r, body);
    }
    return term(0, {});
  }

  /// A random sigma of degree n over the free names, moving only names of one
  /// sort together. n = 2: transposition or id; n = 3: a 3-cycle or id.
  Permutation sigma(std::size_t n) {
    if (n == 2) {
      switch (uniform(0, 4)) {
        case 0: return Permutation::identity(2);
        case 1: return Permutation::from_cycles("(a b)", 2);
        case 2: return Permutation::from_cycles("(d u)", 2);
        case 3: return Permutation::from_cycles("(a b)(d u)", 2);
        default: return Permutation::from_cycles("(b c)", 2);
      }
    }
    if (n == 3) {
      switch (uniform(0, 3)) {
        case 0: return Permutation::identity(3);
        case 1: return Permutation::from_cycles("(a b c)", 3);
        default: return Permutation::from_cycles("(c b a)", 3);
      }
    }
    return Permutation::identity(n);
  }

  /// Unions of sigma-orbits of free names of the seed, chosen at random.
  std::vector<Name> restricted(const Process& seed, const Permutation& sigma) {
    const NameSet fn = free_names(seed);
    NameSet done;
    std::vector<Name> out;
    for (const auto& x : fn) {
      if (done.count(x)) continue;
      std::vector<Name> orbit;
      Name y = x;
      do {
        orbit.push_back(y);
        done.insert(y);
        y = sigma(y);
      } while (y != x);
      bool all_free = true;
      for (const auto& z : orbit) all_free &= fn.count(z) > 0;
      if (all_free && chance(0.4)) out.insert(out.end(), orbit.begin(), orbit.end());
    }
    return out;
  }

  /// A replication-free separate-choice symmetric network.
  SymNet symnet(std::size_t n, bool extrusion) {
    Options o;
    o.prefixes = uniform(2, 6);
    o.force_extrusion = extrusion;
    const Process seed = process(o);
    const Permutation s = sigma(n);
    return build_symmetric(seed, n, s, restricted(seed, s));
  }

 private:
  inline static const std::vector<Name> kCarry = {"a", "b", "c"};
  inline static const std::vector<Name> kUnitChannels = {"d", "u"};

  Name unit_channel(const std::vector<Name>& locals) {
    if (!locals.empty() && chance(0.5)) return pick(locals);
    return pick(kUnitChannels);
  }

  Guard guard(bool output, const std::vector<Name>& locals, Name* bound) {
    if (chance(0.12)) return Guard::tau();
    const bool carry = chance(0.55);
    if (output) {
      if (!carry) return Guard::output(unit_channel(locals));
      std::vector<Name> objs = kUnitChannels;
      objs.insert(objs.end(), locals.begin(), locals.end());
      return Guard::output(pick(kCarry), pick(objs));
    }
    if (!carry) return Guard::input(unit_channel(locals));
    *bound = "z" + std::to_string(next_++);
    return Guard::input(pick(kCarry), *bound);
  }

  Process term(int depth, std::vector<Name> locals) {
    if (left_ <= 0 || depth > 4) return chance(0.1) ? Process::success() : Process::nil();
    const int roll = uniform(0, 99);
    if (roll < 18 && left_ >= 2) {
      Process l = term(depth + 1, locals);
      return Process::par(l, term(depth + 1, locals));
    }
    if (roll < 28 && opts_.restriction) {
      const Name r = "r" + std::to_string(next_++);
      locals.push_back(r);
      return Process::restrict(r, term(depth + 1, locals));
    }
    if (roll < 33 && opts_.replication && left_ >= 2) {
      --left_;
      return Process::repl(Process::prefix(guard(false, locals, nullptr_guard()),
                                           Process::nil()));
    }
    const int k = (left_ >= 2 && chance(0.45)) ? 2 : 1;
    const bool first_output = chance(0.5);
    std::vector<Branch> branches;
    for (int i = 0; i < k && left_ > 0; ++i) {
      --left_;
      const bool output = opts_.separate ? first_output : chance(0.5);
      Name bound;
      Guard g = guard(output, locals, &bound);
      auto inner = locals;
      if (!bound.empty()) inner.push_back(bound);
      branches.push_back({g, term(depth + 1, inner)});
    }
    return Process::sum(std::move(branches));
  }

  Name* nullptr_guard() {
    scratch_.clear();
    return &scratch_;
  }

  std::mt19937_64 rng_;
  Options opts_;
  int left_ = 0;
  int next_ = 0;
  Name scratch_;
};

}  // namespace pisym::gen
