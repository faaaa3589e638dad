#include "pisym/permutation.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace pisym {

Permutation::Permutation(std::map<Name, Name> mapping, std::size_t degree)
    : degree_(degree) {
  if (degree == 0) throw PermutationError("degree must be at least 1");
  NameSet targets;
  for (auto& [from, to] : mapping) {
    if (is_unit(from) || is_unit(to))
      throw PermutationError("the unit name cannot be permuted");
    if (!targets.insert(to).second)
      throw PermutationError("not injective: two names map to " + to);
    if (from != to) map_.emplace(from, to);
  }
  for (const auto& [from, to] : map_) {
    if (!map_.count(to))
      throw PermutationError("not a bijection on its support: " + to +
                             " has no image");
  }
  if (degree_ % order() != 0)
    throw PermutationError("permutation " + to_string() +
                           " is not of degree " + std::to_string(degree_));
}

Permutation Permutation::identity(std::size_t degree) {
  return Permutation({}, degree);
}

namespace {

// Reads one name token inside a cycle: identifier chars, primes or a quoted
// token.
Name read_cycle_name(const std::string& s, std::size_t& i) {
  Name n;
  if (s[i] == '\'') {
    ++i;
    while (i < s.size() && s[i] != '\'') n += s[i++];
    if (i == s.size()) throw PermutationError("unterminated quoted name");
    ++i;
    while (i < s.size() && s[i] == '\'') n += s[i++];
    if (n.empty()) throw PermutationError("empty quoted name");
    return n;
  }
  while (i < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
    n += s[i++];
  while (i < s.size() && s[i] == '\'') n += s[i++];
  if (n.empty())
    throw PermutationError(std::string("unexpected character '") + s[i] +
                           "' in cycle notation");
  return n;
}

}  // namespace

Permutation Permutation::from_cycles(const std::string& text,
                                     std::size_t degree) {
  std::map<Name, Name> m;
  NameSet seen;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[i])) ||
            text[i] == ';'))
      ++i;
  };
  skip();
  if (text.substr(i) == "id") return identity(degree);
  while (i < text.size()) {
    if (text[i] != '(') throw PermutationError("expected '(' in cycle notation");
    ++i;
    std::vector<Name> cycle;
    while (true) {
      while (i < text.size() &&
             (std::isspace(static_cast<unsigned char>(text[i])) ||
              text[i] == ','))
        ++i;
      if (i == text.size()) throw PermutationError("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      Name n = read_cycle_name(text, i);
      if (!seen.insert(n).second)
        throw PermutationError("name " + n + " appears in two cycles");
      cycle.push_back(std::move(n));
    }
    for (std::size_t k = 0; k < cycle.size(); ++k)
      m[cycle[k]] = cycle[(k + 1) % cycle.size()];
    skip();
  }
  return Permutation(std::move(m), degree);
}

const Name& Permutation::operator()(const Name& n) const {
  auto it = map_.find(n);
  return it == map_.end() ? n : it->second;
}

NameSet Permutation::support() const {
  NameSet s;
  for (const auto& kv : map_) s.insert(kv.first);
  return s;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.degree_ = degree_;
  for (const auto& [from, to] : map_) p.map_.emplace(to, from);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  std::map<Name, Name> m;
  NameSet dom = support();
  for (const auto& kv : other.map_) dom.insert(kv.first);
  for (const auto& n : dom) m[n] = (*this)(other(n));
  Permutation p;
  p.degree_ = degree_;
  for (auto& [from, to] : m)
    if (from != to) p.map_.emplace(from, to);
  return p;
}

Permutation Permutation::power(long k) const {
  const long ord = static_cast<long>(order());
  long e = ((k % ord) + ord) % ord;
  Permutation result;
  result.degree_ = degree_;
  for (long j = 0; j < e; ++j) result = compose(result);
  result.degree_ = degree_;
  return result;
}

Permutation Permutation::with_degree(std::size_t degree) const {
  return Permutation(map_, degree);
}

bool Permutation::extends(const Permutation& smaller) const {
  for (const auto& [from, to] : smaller.map_)
    if ((*this)(from) != to) return false;
  return true;
}

std::size_t Permutation::order() const {
  std::size_t ord = 1;
  NameSet done;
  for (const auto& kv : map_) {
    if (done.count(kv.first)) continue;
    std::size_t len = 0;
    Name cur = kv.first;
    do {
      done.insert(cur);
      cur = (*this)(cur);
      ++len;
    } while (cur != kv.first);
    ord = std::lcm(ord, len);
  }
  return ord;
}

std::string Permutation::to_string() const {
  if (map_.empty()) return "id";
  std::ostringstream os;
  NameSet done;
  for (const auto& kv : map_) {
    if (done.count(kv.first)) continue;
    os << '(';
    Name cur = kv.first;
    bool first = true;
    do {
      if (!first) os << ' ';
      first = false;
      os << quote_name(cur);
      done.insert(cur);
      cur = (*this)(cur);
    } while (cur != kv.first);
    os << ')';
  }
  return os.str();
}

}  // namespace pisym
