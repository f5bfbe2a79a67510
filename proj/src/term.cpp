#include "acrwl/term.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace acrwl {

namespace {

class Interner {
 public:
  uint32_t get(std::string_view name) {
    {
      std::shared_lock lock(mu_);
      auto it = ids_.find(std::string(name));
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = ids_.try_emplace(std::string(name), 0);
    if (inserted) {
      it->second = static_cast<uint32_t>(names_.size());
      names_.emplace_back(name);
    }
    return it->second;
  }
  const std::string& name(uint32_t id) {
    std::shared_lock lock(mu_);
    return names_.at(id);  // deque keeps references stable
  }

 private:
  std::shared_mutex mu_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::deque<std::string> names_;
};

Interner& sym_table() {
  static Interner t;
  return t;
}
Interner& var_table() {
  static Interner t;
  return t;
}
std::atomic<uint64_t> fresh_counter{0};

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Sym intern_sym(std::string_view name) { return Sym{sym_table().get(name)}; }
const std::string& sym_name(Sym s) { return sym_table().name(s.id); }
Var intern_var(std::string_view name) { return Var{var_table().get(name)}; }
const std::string& var_name(Var v) { return var_table().name(v.id); }

Var fresh_var(std::string_view hint) {
  std::string base(hint);
  if (auto pos = base.find('#'); pos != std::string::npos) base.resize(pos);
  if (base.empty()) base = "V";
  uint64_t n = ++fresh_counter;
  return intern_var(base + "#" + std::to_string(n));
}

struct Term::Node {
  Kind kind;
  uint32_t id;  // Var or Sym id
  std::vector<Term> args;
  size_t hash;
  uint32_t size;
  uint32_t depth;
  bool has_bottom;
  bool ground;
};

namespace {
const std::shared_ptr<const Term::Node>& bottom_node() {
  static const auto n = std::make_shared<const Term::Node>(
      Term::Node{Kind::Bottom, 0, {}, 0x51ed27, 1, 1, true, true});
  return n;
}
}  // namespace

Term::Term() : node_(bottom_node()) {}
Term Term::bottom() { return Term(); }

Term Term::var(Var v) {
  size_t h = mix(0x7a11, v.id);
  return Term(std::make_shared<const Node>(Node{Kind::Var, v.id, {}, h, 1, 1, false, false}));
}

Term Term::app(Sym f, std::vector<Term> args) {
  size_t h = mix(0xa99, f.id);
  uint32_t size = 1, depth = 0;
  bool hb = false, ground = true;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    size += a.size();
    depth = std::max(depth, a.depth());
    hb = hb || a.has_bottom();
    ground = ground && a.is_ground();
  }
  h = mix(h, args.size());
  return Term(std::make_shared<const Node>(
      Node{Kind::App, f.id, std::move(args), h, size, depth + 1, hb, ground}));
}

Kind Term::kind() const { return node_->kind; }
Var Term::var_id() const { return Var{node_->id}; }
Sym Term::head() const { return Sym{node_->id}; }
const std::vector<Term>& Term::args() const { return node_->args; }
size_t Term::hash() const { return node_->hash; }
uint32_t Term::size() const { return node_->size; }
uint32_t Term::depth() const { return node_->depth; }
bool Term::has_bottom() const { return node_->has_bottom; }
bool Term::is_ground() const { return node_->ground; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.id != y.id || x.size != y.size) return false;
  if (x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!(x.args[i] == y.args[i])) return false;
  return true;
}

int compare(const Term& a, const Term& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Bottom:
      return 0;
    case Kind::Var: {
      int c = var_name(a.var_id()).compare(var_name(b.var_id()));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::App: {
      if (a.head() != b.head()) {
        int c = sym_name(a.head()).compare(sym_name(b.head()));
        if (c != 0) return c < 0 ? -1 : 1;
      }
      if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
      for (size_t i = 0; i < a.arity(); ++i)
        if (int c = compare(a.arg(i), b.arg(i)); c != 0) return c;
      return 0;
    }
  }
  return 0;
}

static void print(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case Kind::Bottom:
      os << "_|_";
      return;
    case Kind::Var:
      os << var_name(t.var_id());
      return;
    case Kind::App:
      os << sym_name(t.head());
      if (t.arity() > 0) {
        os << '(';
        for (size_t i = 0; i < t.arity(); ++i) {
          if (i) os << ", ";
          print(os, t.arg(i));
        }
        os << ')';
      }
      return;
  }
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

void collect_vars(const Term& t, std::vector<Var>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    for (Var v : out)
      if (v == t.var_id()) return;
    out.push_back(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

std::vector<Var> dvar(const Term& t) {
  std::vector<Var> out;
  collect_vars(t, out);
  return out;
}

std::set<Var> var_set(const Term& t) {
  auto v = dvar(t);
  return {v.begin(), v.end()};
}

bool occurs(Var v, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_var()) return t.var_id() == v;
  for (const auto& a : t.args())
    if (occurs(v, a)) return true;
  return false;
}

size_t count_occurrences(Var v, const Term& t) {
  if (t.is_ground()) return 0;
  if (t.is_var()) return t.var_id() == v ? 1 : 0;
  size_t n = 0;
  for (const auto& a : t.args()) n += count_occurrences(v, a);
  return n;
}

static bool linear_into(const Term& t, std::set<Var>& seen) {
  if (t.is_ground()) return true;
  if (t.is_var()) return seen.insert(t.var_id()).second;
  for (const auto& a : t.args())
    if (!linear_into(a, seen)) return false;
  return true;
}

bool is_linear(const std::vector<Term>& tuple) {
  std::set<Var> seen;
  for (const auto& t : tuple)
    if (!linear_into(t, seen)) return false;
  return true;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (uint32_t i : p) cur = &cur->arg(i);
  return *cur;
}

Term replace_at(const Term& t, const Position& p, size_t from, const Term& repl) {
  if (from == p.size()) return repl;
  std::vector<Term> args = t.args();
  args[p[from]] = replace_at(t.arg(p[from]), p, from + 1, repl);
  return Term::app(t.head(), std::move(args));
}

bool approximates(const Term& t1, const Term& t2) {
  if (t1.is_bottom()) return true;
  if (t1.identity() == t2.identity()) return true;
  if (t1.kind() != t2.kind()) return false;
  if (t1.is_var()) return t1.var_id() == t2.var_id();
  if (t1.head() != t2.head() || t1.arity() != t2.arity()) return false;
  for (size_t i = 0; i < t1.arity(); ++i)
    if (!approximates(t1.arg(i), t2.arg(i))) return false;
  return true;
}

}  // namespace acrwl
