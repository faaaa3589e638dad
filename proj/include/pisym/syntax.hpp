#pragma once

#include <map>
#include <stdexcept>

#include "pisym/permutation.hpp"
#include "pisym/process.hpp"

namespace pisym {

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Free names, excluding the unit name.
NameSet free_names(const Process& p);
/// Free names including the unit name when some object-free output occurs.
NameSet free_names_with_unit(const Process& p);
/// Restriction binders and input binders.
NameSet bound_names(const Process& p);
/// Every name occurring in p, free or bound (unit excluded).
NameSet all_names(const Process& p);

bool occurs_free(const Process& p, const Name& n);

/// Replacement map target -> replacement; identity elsewhere.
using Substitution = std::map<Name, Name>;

/// Capture-avoiding simultaneous substitution. Binders that would capture a
/// replacement are renamed to primed variants.
Process substitute(const Process& p, const Substitution& s);

/// Renames free names by sigma without touching binders. Throws
/// PreconditionError when the support of sigma meets bound_names(p).
Process apply_perm(const Permutation& sigma, const Process& p);

/// Renames every binder listed in `avoid` to a fresh primed variant.
Process freshen(const Process& p, const NameSet& avoid);

/// True when no Sum mixes input and output guards.
bool is_separate(const Process& p);

/// Bound and free names are disjoint and no binder occurs inside the scope of
/// a binder with the same name. Reports the first offending name.
bool is_wellformed(const Process& p, Name* offending = nullptr);

/// Representative of the structural-congruence class of p: restrictions
/// hoisted out of parallel compositions, children of each Par ordered, and
/// binders renamed to a position-determined alphabet.
Process canonicalize(const Process& p);

bool congruent(const Process& p, const Process& q);

/// Restriction prefix of a canonical term, followed by its body.
std::pair<std::vector<Name>, Process> split_restrictions(const Process& p);

/// True when `n` is a binder name produced by canonicalize.
bool is_canonical_binder(const Name& n);

/// Success marker reachable through Par and Restrict only.
bool has_top_level_success(const Process& p);

/// Drops restrictions whose binder is not free in their scope. Not part of
/// structural congruence; used to present states without dead scopes.
Process drop_vacuous_restrictions(const Process& p);

}  // namespace pisym
