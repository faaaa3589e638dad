#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisym/name.hpp"

namespace pisym {

class PermutationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite-support bijection on names together with a declared degree n such
/// that applying it n times is the identity. n need not be minimal.
class Permutation {
 public:
  /// The identity of degree 1.
  Permutation() = default;

  /// Throws PermutationError unless `mapping` is a bijection on its support,
  /// avoids the unit name, and has order dividing `degree`.
  Permutation(std::map<Name, Name> mapping, std::size_t degree);

  static Permutation identity(std::size_t degree = 1);

  /// Parses cycle notation such as "(x y)(1 2)" or "(x y);(1 2)".
  static Permutation from_cycles(const std::string& text, std::size_t degree);

  const Name& operator()(const Name& n) const;

  std::size_t degree() const { return degree_; }
  const std::map<Name, Name>& mapping() const { return map_; }
  NameSet support() const;
  bool is_identity() const { return map_.empty(); }

  /// sigma^k for any integer k (negative powers use the inverse).
  Permutation power(long k) const;
  Permutation inverse() const;
  /// (this ∘ other)(n) = this(other(n)); degree is taken from `this`.
  Permutation compose(const Permutation& other) const;

  /// Same mapping, different declared degree (validated).
  Permutation with_degree(std::size_t degree) const;

  /// True when `this` agrees with `smaller` on the support of `smaller`.
  bool extends(const Permutation& smaller) const;

  /// Smallest k >= 1 with sigma^k = id.
  std::size_t order() const;

  /// Cycle notation, e.g. "(x y)(1 2)"; "id" for the identity.
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.map_ == b.map_ && a.degree_ == b.degree_;
  }

 private:
  std::map<Name, Name> map_;  // only non-fixed points
  std::size_t degree_ = 1;
};

}  // namespace pisym
