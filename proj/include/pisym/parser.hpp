#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pisym/process.hpp"

namespace pisym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The parsed term binds a name that also occurs free, or shadows a binder.
class WellformednessError : public std::runtime_error {
 public:
  WellformednessError(const std::string& what, Name name)
      : std::runtime_error(what), name_(std::move(name)) {}
  const Name& name() const { return name_; }

 private:
  Name name_;
};

/// Grammar (loosest first):
///
///   proc     := sum ('|' proc)?                 right-nested parallel
///   sum      := prefixed ('+' prefixed)*        operands must be guarded
///   prefixed := guard ('.' prefixed)? | '0' | 'ok' | 'rep' prefixed
///             | 'new' name (',' name)* 'in' prefixed | '(' proc ')'
///   guard    := name '!' name? | name '?' ('(' name ')')? | 'tau'
///
/// Names are identifiers ([A-Za-z0-9_]+ followed by primes) or quoted tokens
/// such as '1'. `#` starts a comment running to the end of the line.
Process parse(std::string_view text);

/// Inverse of parse on its own output.
std::string format(const Process& p);

std::string format_guard(const Guard& g);

}  // namespace pisym
