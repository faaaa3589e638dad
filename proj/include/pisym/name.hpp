#pragma once

#include <set>
#include <string>
#include <string_view>

namespace pisym {

/// Names are plain tokens drawn from an unbounded universe.
using Name = std::string;
using NameSet = std::set<Name>;

/// The distinguished unit name carried by object-free prefixes (`x!`, `x?`).
/// It is never bound and every permutation fixes it.
inline const Name kUnit{};

inline bool is_unit(const Name& n) { return n.empty(); }

/// First primed variant of `base` (base', base'', ...) not in `avoid`.
Name fresh_name(const Name& base, const NameSet& avoid);

/// Like fresh_name, but returns `base` itself when it is unused.
Name fresh_or_same(const Name& base, const NameSet& avoid);

/// True when the name prints without quotes: [A-Za-z_][A-Za-z0-9_]*'* and not
/// a keyword.
bool is_plain_identifier(std::string_view n);

/// Text form of a name as accepted by the parser.
std::string quote_name(const Name& n);

}  // namespace pisym
