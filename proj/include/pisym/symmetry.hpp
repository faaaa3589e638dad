#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pisym/lts.hpp"
#include "pisym/permutation.hpp"
#include "pisym/process.hpp"

namespace pisym {

class SymmetryError : public std::runtime_error {
 public:
  enum class Code {
    NotFreeName,      // a restricted name is not free in the seed
    DuplicateName,    // a restricted name is listed twice
    NotClosed,        // the restricted tuple is not closed under sigma
    MovesBoundName,   // sigma moves a bound name of the seed
    WrongDegree,      // sigma^n is not the identity
  };
  SymmetryError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// (new x~)(sigma^0(P) | (sigma^1(P) | ... )) with the components kept literal.
struct SymNet {
  Process seed;
  std::size_t degree = 1;
  std::vector<Name> restricted;
  Permutation sigma;
  std::vector<Process> components;

  NetState state() const { return {restricted, components}; }
  Process flatten() const { return state().flatten(); }
};

SymNet build_symmetric(const Process& seed, std::size_t n,
                       const Permutation& sigma,
                       const std::vector<Name>& restricted);

struct Recognition {
  std::optional<Process> seed;
  std::size_t index = 0;  // first component that breaks symmetry
  std::string reason;

  explicit operator bool() const { return seed.has_value(); }
};

/// Component i must be literally sigma^i(component 0), and the restricted
/// names must be closed under sigma.
Recognition recognize_symmetric(const NetState& net, const Permutation& sigma);

/// Packages a recognized state as a symmetric network.
std::optional<SymNet> as_symmetric(const NetState& net, const Permutation& sigma);

/// Replaces the listed components. Throws PreconditionError on a repeated or
/// out-of-range index.
NetState indexed_substitute(const NetState& net,
                            const std::vector<std::pair<std::size_t, Process>>& bindings);
NetState indexed_substitute(const SymNet& net,
                            const std::vector<std::pair<std::size_t, Process>>& bindings);

/// mu followed by its n-1 symmetric counterparts. The i-th label (1-based)
/// applies sigma^(i-1).
std::vector<Label> symmetric_label_sequence(const Label& mu, std::size_t n,
                                            const Permutation& sigma,
                                            const std::vector<Name>& scope);

/// Smallest extension of `base` under which consecutive components are
/// renamings of each other and consecutive labels of `labels` are renamings
/// of each other. Bound names must coincide literally. Returns nullopt when
/// no such extension of degree n exists.
std::optional<Permutation> infer_symmetry(const NetState& net,
                                          const Permutation& base,
                                          const std::vector<Label>& labels = {});

}  // namespace pisym
