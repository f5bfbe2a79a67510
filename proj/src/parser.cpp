#include "acrwl/parser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace acrwl {

namespace {

enum class Tok { Ident, Var, Bottom, LParen, RParen, Comma, Dot, Colon, Arrow, Back, EqEq, Tilde, Geq, End };

struct Token {
  Tok kind;
  std::string text;
  SrcPos pos;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "variable";
    case Tok::Bottom: return "'_|_'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Back: return "'<='";
    case Tok::EqEq: return "'=='";
    case Tok::Tilde: return "'~'";
    case Tok::Geq: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view src, const std::string& file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    SrcPos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      if (src.substr(i, 3) == "_|_") {
        out.push_back({Tok::Bottom, "_|_", pos});
        adv(3);
        continue;
      }
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      bool is_var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      out.push_back({is_var ? Tok::Var : Tok::Ident, word, pos});
      adv(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") { out.push_back({Tok::Arrow, "->", pos}); adv(2); continue; }
    if (two == "<=") { out.push_back({Tok::Back, "<=", pos}); adv(2); continue; }
    if (two == "==") { out.push_back({Tok::EqEq, "==", pos}); adv(2); continue; }
    if (two == ">=") { out.push_back({Tok::Geq, ">=", pos}); adv(2); continue; }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", pos}); break;
      case ')': out.push_back({Tok::RParen, ")", pos}); break;
      case ',': out.push_back({Tok::Comma, ",", pos}); break;
      case '.': out.push_back({Tok::Dot, ".", pos}); break;
      case ':': out.push_back({Tok::Colon, ":", pos}); break;
      case '~': out.push_back({Tok::Tilde, "~", pos}); break;
      default:
        throw Error(file, pos, std::string("unexpected character '") + c + "'");
    }
    adv(1);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

struct RawType {
  std::string name;
  std::vector<RawType> args;
  SrcPos pos;
};

struct RawExpr {
  enum { Var, App, Bottom } kind;
  std::string name;
  std::vector<RawExpr> args;
  SrcPos pos;
};

struct RawDecl {
  enum { Datatype, Cons, Fun, Axiom, Rule, Goal } kind;
  SrcPos pos;
  std::string name;
  std::vector<std::string> params;       // datatype
  std::vector<RawType> arg_types;        // cons/fun
  RawType result;                        // cons/fun
  RawExpr lhs, rhs;                      // axiom/rule
  std::vector<std::pair<RawExpr, RawExpr>> joins;  // rule conditions / goal
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[pos_++]; }
  Token expect(Tok k, const char* what = nullptr) {
    if (!at(k)) {
      std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw Error(file_, peek().pos,
                  std::string("expected ") + (what ? what : tok_name(k)) + ", found " + found);
    }
    return take();
  }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw Error(file_, peek().pos, msg); }

  RawType type() {
    Token t = expect(Tok::Ident, "type");
    RawType r{t.text, {}, t.pos};
    if (accept(Tok::LParen)) {
      do r.args.push_back(type());
      while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    return r;
  }

  void fn_type(RawDecl& d) {
    if (accept(Tok::LParen)) {
      if (!at(Tok::RParen)) {
        do d.arg_types.push_back(type());
        while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
      expect(Tok::Arrow);
      d.result = type();
      return;
    }
    RawType t = type();
    if (accept(Tok::Arrow)) {
      d.arg_types.push_back(std::move(t));
      d.result = type();
    } else {
      d.result = std::move(t);
    }
  }

  RawExpr expr(bool allow_bottom) {
    const Token& t = peek();
    if (t.kind == Tok::Var) {
      take();
      return {RawExpr::Var, t.text, {}, t.pos};
    }
    if (t.kind == Tok::Bottom) {
      if (!allow_bottom) fail("'_|_' is not allowed here");
      Token b = take();
      return {RawExpr::Bottom, "_|_", {}, b.pos};
    }
    Token id = expect(Tok::Ident, "expression");
    RawExpr r{RawExpr::App, id.text, {}, id.pos};
    if (accept(Tok::LParen)) {
      if (!at(Tok::RParen)) {
        do r.args.push_back(expr(allow_bottom));
        while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
    }
    return r;
  }

  std::vector<std::pair<RawExpr, RawExpr>> joins(bool allow_bottom) {
    std::vector<std::pair<RawExpr, RawExpr>> out;
    do {
      RawExpr a = expr(allow_bottom);
      expect(Tok::EqEq);
      RawExpr b = expr(allow_bottom);
      out.emplace_back(std::move(a), std::move(b));
    } while (accept(Tok::Comma));
    return out;
  }

  RawDecl decl() {
    Token kw = expect(Tok::Ident, "declaration keyword");
    RawDecl d;
    d.pos = kw.pos;
    if (kw.text == "datatype") {
      d.kind = RawDecl::Datatype;
      d.name = expect(Tok::Ident, "datatype name").text;
      if (accept(Tok::LParen)) {
        do d.params.push_back(expect(Tok::Ident, "type parameter").text);
        while (accept(Tok::Comma));
        expect(Tok::RParen);
      }
    } else if (kw.text == "cons" || kw.text == "fun") {
      d.kind = kw.text == "cons" ? RawDecl::Cons : RawDecl::Fun;
      Token n = expect(Tok::Ident, "symbol name");
      d.name = n.text;
      d.pos = n.pos;
      expect(Tok::Colon);
      fn_type(d);
    } else if (kw.text == "axiom") {
      d.kind = RawDecl::Axiom;
      d.lhs = expr(false);
      expect(Tok::Tilde);
      d.rhs = expr(false);
    } else if (kw.text == "rule") {
      d.kind = RawDecl::Rule;
      d.lhs = expr(false);
      expect(Tok::Arrow);
      d.rhs = expr(false);
      if (accept(Tok::Back)) d.joins = joins(false);
    } else if (kw.text == "goal") {
      d.kind = RawDecl::Goal;
      d.joins = joins(false);
    } else {
      throw Error(file_, kw.pos, "unknown declaration '" + kw.text + "'");
    }
    expect(Tok::Dot);
    return d;
  }

  std::vector<RawDecl> program() {
    std::vector<RawDecl> out;
    while (!at(Tok::End)) out.push_back(decl());
    return out;
  }

  const std::string& file() const { return file_; }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string file_;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"datatype", "cons", "fun", "axiom", "rule", "goal"};
  return k;
}

class Elaborator {
 public:
  Elaborator(const Signature& sig, std::string file, std::unordered_map<const void*, SrcPos>* positions)
      : sig_(sig), file_(std::move(file)), positions_(positions) {}

  TypeExpr type(const RawType& t) const {
    Sym k = intern_sym(t.name);
    if (sig_.is_datatype(k)) {
      if (sig_.datatype_arity(k) != t.args.size())
        throw Error(file_, t.pos,
                    "type constructor '" + t.name + "' expects " +
                        std::to_string(sig_.datatype_arity(k)) + " argument(s), found " +
                        std::to_string(t.args.size()));
      std::vector<TypeExpr> args;
      for (const auto& a : t.args) args.push_back(type(a));
      return Term::app(k, std::move(args));
    }
    if (!t.args.empty()) throw Error(file_, t.pos, "unknown type constructor '" + t.name + "'");
    return Term::var(t.name);
  }

  Term expr(const RawExpr& e) const {
    Term out;
    switch (e.kind) {
      case RawExpr::Bottom:
        out = Term::bottom();
        return out;  // shared node, no position
      case RawExpr::Var:
        out = Term::var(e.name);
        break;
      case RawExpr::App: {
        Sym s = intern_sym(e.name);
        if (sig_.kind(s) == SymKind::None) throw Error(file_, e.pos, "undeclared symbol '" + e.name + "'");
        size_t ar = sig_.arity(s);
        if (ar != e.args.size())
          throw Error(file_, e.pos,
                      "arity mismatch: '" + e.name + "' expects " + std::to_string(ar) +
                          " argument(s), found " + std::to_string(e.args.size()));
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(expr(a));
        out = Term::app(s, std::move(args));
        break;
      }
    }
    if (positions_) (*positions_)[out.identity()] = e.pos;
    return out;
  }

 private:
  const Signature& sig_;
  std::string file_;
  std::unordered_map<const void*, SrcPos>* positions_;
};

void collect_type_vars(const TypeExpr& t, std::set<Var>& out) {
  for (Var v : dvar(t)) out.insert(v);
}

}  // namespace

Program parse_program(std::string_view text, const std::string& file) {
  Parser p(lex(text, file), file);
  auto decls = p.program();
  Program prog;
  prog.file = file;

  for (const auto& d : decls) {
    if (d.kind != RawDecl::Datatype) continue;
    if (keywords().count(d.name)) throw Error(file, d.pos, "'" + d.name + "' is a keyword");
    prog.sig.add_datatype(intern_sym(d.name), d.params.size(), d.pos, file);
  }
  Elaborator el(prog.sig, file, &prog.positions);
  for (const auto& d : decls) {
    if (d.kind != RawDecl::Cons && d.kind != RawDecl::Fun) continue;
    if (keywords().count(d.name)) throw Error(file, d.pos, "'" + d.name + "' is a keyword");
    SymbolType st;
    for (const auto& a : d.arg_types) st.args.push_back(el.type(a));
    st.result = el.type(d.result);
    if (d.kind == RawDecl::Cons) {
      if (!st.result.is_app())
        throw Error(file, d.result.pos, "result type of constructor '" + d.name + "' must be a datatype");
      std::set<Var> res_vars, arg_vars;
      collect_type_vars(st.result, res_vars);
      for (const auto& a : st.args) collect_type_vars(a, arg_vars);
      for (Var v : arg_vars)
        if (!res_vars.count(v))
          throw Error(file, d.pos,
                      "constructor '" + d.name + "' is not transparent: type variable '" + var_name(v) +
                          "' does not occur in its result type");
    }
    prog.sig.add_symbol(d.kind == RawDecl::Cons ? SymKind::Cons : SymKind::Fun, intern_sym(d.name),
                        std::move(st), d.pos, file);
  }

  for (const auto& d : decls) {
    switch (d.kind) {
      case RawDecl::Axiom: {
        Axiom ax{el.expr(d.lhs), el.expr(d.rhs), d.pos};
        for (const Term* side : {&ax.lhs, &ax.rhs})
          if (!prog.is_data_term(*side))
            throw Error(file, prog.pos_of(*side), "axiom side is not a data term: " + to_string(*side));
        prog.axioms.push_back(std::move(ax));
        break;
      }
      case RawDecl::Rule: {
        Term lhs = el.expr(d.lhs);
        if (!lhs.is_app() || !prog.sig.is_fun(lhs.head()))
          throw Error(file, d.lhs.pos, "rule head must be a defined function applied to patterns");
        Rule r;
        r.fun = lhs.head();
        r.lhs_args = lhs.args();
        r.rhs = el.expr(d.rhs);
        r.pos = d.pos;
        for (const auto& a : r.lhs_args)
          if (!prog.is_data_term(a))
            throw Error(file, prog.pos_of(a), "rule pattern is not a data term: " + to_string(a));
        if (!is_linear(r.lhs_args))
          throw Error(file, d.lhs.pos, "non-linear rule head: " + to_string(lhs));
        for (const auto& [a, b] : d.joins) r.conds.push_back({el.expr(a), el.expr(b)});
        prog.rules.push_back(std::move(r));
        break;
      }
      case RawDecl::Goal: {
        std::vector<Join> g;
        for (const auto& [a, b] : d.joins) g.push_back({el.expr(a), el.expr(b)});
        prog.goals.push_back(std::move(g));
        break;
      }
      default:
        break;
    }
  }
  prog.finalize();
  return prog;
}

Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(path, {}, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), path);
}

namespace {
template <class F>
auto with_parser(std::string_view text, const ParseOptions& opts, F&& f) {
  Parser p(lex(text, opts.source), opts.source);
  auto r = f(p);
  p.accept(Tok::Dot);
  if (!p.at(Tok::End)) p.fail("unexpected trailing input '" + p.peek().text + "'");
  return r;
}
}  // namespace

Term parse_expr(const Program& prog, std::string_view text, ParseOptions opts) {
  Elaborator el(prog.sig, opts.source, opts.positions);
  return with_parser(text, opts, [&](Parser& p) { return el.expr(p.expr(opts.allow_bottom)); });
}

std::vector<Join> parse_goal(const Program& prog, std::string_view text, ParseOptions opts) {
  Elaborator el(prog.sig, opts.source, opts.positions);
  return with_parser(text, opts, [&](Parser& p) {
    std::vector<Join> out;
    for (const auto& [a, b] : p.joins(opts.allow_bottom)) out.push_back({el.expr(a), el.expr(b)});
    return out;
  });
}

Relation parse_relation(const Program& prog, std::string_view text, ParseOptions opts) {
  Elaborator el(prog.sig, opts.source, opts.positions);
  return with_parser(text, opts, [&](Parser& p) {
    Relation r;
    r.lhs = el.expr(p.expr(opts.allow_bottom));
    if (p.accept(Tok::EqEq)) r.op = "==";
    else if (p.accept(Tok::Arrow)) r.op = "->";
    else if (p.accept(Tok::Geq)) r.op = ">=";
    else p.fail("expected '==', '->' or '>='");
    r.rhs = el.expr(p.expr(opts.allow_bottom));
    return r;
  });
}

namespace {
std::string print_fn_type(const SymbolType& t) {
  std::ostringstream os;
  if (t.args.size() == 1) {
    os << to_string(t.args[0]) << " -> ";
  } else if (!t.args.empty()) {
    os << '(';
    for (size_t i = 0; i < t.args.size(); ++i) os << (i ? ", " : "") << to_string(t.args[i]);
    os << ") -> ";
  }
  os << to_string(t.result);
  return os.str();
}
}  // namespace

std::string print_program(const Program& prog) {
  std::ostringstream os;
  for (const auto& [k, n] : prog.sig.datatypes()) {
    os << "datatype " << sym_name(k);
    if (n) {
      os << '(';
      for (size_t i = 0; i < n; ++i) os << (i ? ", " : "") << "t" << i;
      os << ')';
    }
    os << ".\n";
  }
  for (Sym c : prog.sig.constructors())
    os << "cons " << sym_name(c) << " : " << print_fn_type(prog.sig.type_of(c)) << ".\n";
  for (Sym f : prog.sig.functions())
    os << "fun " << sym_name(f) << " : " << print_fn_type(prog.sig.type_of(f)) << ".\n";
  for (const auto& ax : prog.axioms) os << "axiom " << ax.lhs << " ~ " << ax.rhs << ".\n";
  for (const auto& r : prog.rules) os << "rule " << to_string(r) << ".\n";
  for (const auto& g : prog.goals) {
    os << "goal ";
    for (size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << to_string(g[i]);
    os << ".\n";
  }
  return os.str();
}

}  // namespace acrwl
