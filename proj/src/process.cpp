#include "pisym/process.hpp"

#include <cassert>
#include <cctype>

namespace pisym {

struct Process::Node {
  Kind kind = Kind::Sum;
  std::vector<Branch> branches;
  std::vector<Process> kids;
  Name binder;
};

namespace {
const std::vector<Branch> kNoBranches;
}

Process::Process() {
  static const auto empty = std::make_shared<const Node>();
  node_ = empty;
}

Process Process::sum(std::vector<Branch> branches) {
  if (branches.empty()) return nil();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->branches = std::move(branches);
  return Process(std::move(n));
}

Process Process::prefix(Guard g, Process cont) {
  std::vector<Branch> b;
  b.push_back(Branch{std::move(g), std::move(cont)});
  return sum(std::move(b));
}

Process Process::par(Process left, Process right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Par;
  n->kids = {std::move(left), std::move(right)};
  return Process(std::move(n));
}

Process Process::restrict(Name binder, Process body) {
  assert(!is_unit(binder));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Restrict;
  n->binder = std::move(binder);
  n->kids = {std::move(body)};
  return Process(std::move(n));
}

Process Process::repl(Process body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Repl;
  n->kids = {std::move(body)};
  return Process(std::move(n));
}

Process Process::success() {
  static const auto ok = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Success;
    return std::shared_ptr<const Node>(std::move(n));
  }();
  return Process(ok);
}

Process::Kind Process::kind() const { return node_->kind; }

bool Process::is_nil() const {
  return node_->kind == Kind::Sum && node_->branches.empty();
}

const std::vector<Branch>& Process::branches() const {
  return node_->kind == Kind::Sum ? node_->branches : kNoBranches;
}

const Process& Process::left() const {
  assert(node_->kind == Kind::Par);
  return node_->kids[0];
}

const Process& Process::right() const {
  assert(node_->kind == Kind::Par);
  return node_->kids[1];
}

const Name& Process::binder() const {
  assert(node_->kind == Kind::Restrict);
  return node_->binder;
}

const Process& Process::body() const {
  assert(node_->kind == Kind::Restrict || node_->kind == Kind::Repl);
  return node_->kids[0];
}

std::size_t Process::size() const {
  std::size_t s = 1;
  for (const auto& b : node_->branches) s += b.cont.size();
  for (const auto& k : node_->kids) s += k.size();
  return s;
}

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.binder == y.binder && x.branches == y.branches &&
         x.kids == y.kids;
}

// ---------------------------------------------------------------------------

Name fresh_name(const Name& base, const NameSet& avoid) {
  Name n = base + "'";
  while (avoid.count(n)) n += "'";
  return n;
}

Name fresh_or_same(const Name& base, const NameSet& avoid) {
  return avoid.count(base) ? fresh_name(base, avoid) : base;
}

namespace {
bool is_keyword(std::string_view n) {
  return n == "0" || n == "ok" || n == "rep" || n == "new" || n == "in" ||
         n == "tau";
}
}  // namespace

bool is_plain_identifier(std::string_view n) {
  if (n.empty() || is_keyword(n)) return false;
  const auto c0 = static_cast<unsigned char>(n[0]);
  if (!(std::isalpha(c0) || n[0] == '_')) return false;
  std::size_t i = 1;
  while (i < n.size() &&
         (std::isalnum(static_cast<unsigned char>(n[i])) || n[i] == '_'))
    ++i;
  while (i < n.size() && n[i] == '\'') ++i;
  return i == n.size();
}

std::string quote_name(const Name& n) {
  if (is_plain_identifier(n)) return n;
  // Trailing primes stay outside the quotes: '1'' is the name 1'.
  auto end = n.size();
  while (end > 0 && n[end - 1] == '\'') --end;
  return "'" + n.substr(0, end) + "'" + n.substr(end);
}

}  // namespace pisym
