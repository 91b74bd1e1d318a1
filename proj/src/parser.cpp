// Copyright 2026 The gract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gract/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace gract {

namespace {

std::string describe(SourceLoc loc, const std::vector<std::string>& expected,
                     const std::string& found, const std::string& message) {
  std::ostringstream out;
  out << loc.line << ':' << loc.col << ": ";
  if (!message.empty()) {
    out << message;
  } else {
    out << "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
    out << ", found " << found;
  }
  return out.str();
}

}  // namespace

ParseError::ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found,
                       std::string message)
    : std::runtime_error(describe(loc, expected, found, message)),
      loc_(loc),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { kIdent, kNumber, kSym, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourceLoc loc;
};

std::string show(const Token& t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (starts("//")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    // Run-time names (`f#3`, `y#7`, `$0`) lex as identifiers so that printed
    // configurations parse back.
    if (std::isalpha(c) || c == '_' || c == kSeqBinderPrefix) {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == kFreshMarker))
        ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::kNumber, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    for (std::string_view sym : {"(+)", "<=", "⊕", "∞"}) {
      if (starts(sym)) {
        std::string text(sym == "⊕" ? std::string_view("(+)") : sym);
        out.push_back({sym == "∞" ? Tok::kNumber : Tok::kSym, text, loc});
        advance(sym.size());
        goto next;
      }
    }
    if (std::string_view("(){},:;=!?^").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::kSym, std::string(1, static_cast<char>(c)), loc});
      advance(1);
      continue;
    }
    throw ParseError(loc, {}, "", std::string("unexpected character '") + src[i] + "'");
  next:;
  }
  out.push_back({Tok::kEnd, "", {line, col}});
  return out;
}

const std::set<std::string>& reserved() {
  static const std::set<std::string> kWords = {"let",      "in",       "return",  "hold",
                                               "release",  "unit",     "init",    "start",
                                               "requires", "produces", "measure", "grade"};
  return kWords;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Program& program)
      : toks_(std::move(tokens)), prog_(program) {}

  void parse_program() {
    parse_grade_decl();
    while (peek().kind == Tok::kIdent && peek().text != "init") {
      if (peek(1).text == "(") {
        parse_op_sig();
      } else {
        parse_actor();
      }
    }
    parse_init();
    expect_end();
  }

  ExprPtr parse_standalone(const std::vector<std::string>& scope) {
    scope_ = scope;
    ExprPtr e = parse_seq();
    expect_end();
    return e;
  }

 private:
  // -- token plumbing -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at(std::string_view text) const {
    return peek().kind != Tok::kEnd && peek().text == text;
  }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    take();
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().loc, std::move(expected), show(peek()), "");
  }
  [[noreturn]] void fail_at(SourceLoc loc, const std::string& message) const {
    throw ParseError(loc, {}, "", message);
  }
  Token expect(std::string_view text) {
    if (!at(text)) fail({"'" + std::string(text) + "'"});
    return take();
  }
  Token expect_ident(const std::string& what) {
    if (peek().kind != Tok::kIdent || reserved().count(peek().text)) fail({what});
    return take();
  }
  void expect_end() const {
    if (peek().kind != Tok::kEnd) fail({"end of input"});
  }

  // -- header ---------------------------------------------------------------

  void parse_grade_decl() {
    expect("grade");
    Token kind = peek();
    if (kind.kind != Tok::kIdent) fail({"natEq", "natLeq", "lin", "affine", "level"});
    take();
    if (kind.text == "natEq") {
      prog_.grades = make_nat_exact();
    } else if (kind.text == "natLeq") {
      prog_.grades = make_nat_leq();
    } else if (kind.text == "lin") {
      prog_.grades = make_lin();
    } else if (kind.text == "affine") {
      prog_.grades = make_affine();
    } else if (kind.text == "level") {
      parse_level_spec(kind.loc);
    } else {
      fail_at(kind.loc, "unknown grade instance '" + kind.text + "'");
    }
  }

  std::string level_name() {
    if (peek().kind == Tok::kIdent || (peek().kind == Tok::kNumber && peek().text == "0"))
      return take().text;
    fail({"level name"});
  }

  void parse_level_spec(SourceLoc loc) {
    std::vector<LevelLattice::Relation> relations;
    expect("{");
    if (!at("}")) {
      do {
        std::string lo = level_name();
        relations.emplace_back("0", lo);
        while (accept("<=")) {
          std::string hi = level_name();
          relations.emplace_back(lo, hi);
          lo = hi;
        }
      } while (accept(","));
    }
    expect("}");
    try {
      prog_.grades = LevelLattice::build(relations);
    } catch (const GradeError& e) {
      fail_at(loc, e.what());
    }
  }

  const GradeMonoid& monoid() const { return *prog_.grades; }

  Grade parse_grade() {
    const Token& t = peek();
    if (t.kind == Tok::kNumber || t.kind == Tok::kIdent) {
      if (auto g = monoid().parse(t.text)) {
        take();
        return *g;
      }
      if (t.kind == Tok::kNumber || t.text == "inf")
        fail_at(t.loc, "grade '" + t.text + "' is not in " + std::string(monoid().name()));
      if (monoid().kind() == GradeKind::kLevel)
        fail_at(t.loc, "unknown level '" + t.text + "'");
    }
    fail({"grade"});
  }

  // -- types and contexts ---------------------------------------------------

  Type parse_type() {
    Token head = expect_ident("type");
    if (head.text == "Unit") return Type::unit();
    if (head.text == "Fut" && at("(")) {
      take();
      Type payload = parse_type();
      ActorContext ctx;
      if (accept(",")) ctx = parse_ctx();
      expect(")");
      return Type::fut(std::move(payload), ctx);
    }
    if (!at("^")) fail_at(head.loc, "resource type '" + head.text + "' needs a grade");
    take();
    return Type::res(head.text, parse_grade());
  }

  ResourceEnv parse_resource_list(bool braced) {
    ResourceEnv env;
    auto one = [&] {
      Token r = expect_ident("resource name");
      expect("^");
      Grade g = parse_grade();
      if (env.count(r.text)) fail_at(r.loc, "duplicate resource '" + r.text + "'");
      env[r.text] = g;
    };
    if (!braced) {
      one();
      return env;
    }
    expect("{");
    if (!at("}")) {
      do one();
      while (accept(","));
    }
    expect("}");
    return env;
  }

  ActorContext parse_ctx_entries() {
    ActorContext ctx;
    do {
      Token a = expect_ident("actor name");
      expect(":");
      if (ctx.count(a.text)) fail_at(a.loc, "duplicate actor '" + a.text + "' in context");
      ctx[a.text] = parse_resource_list(at("{"));
    } while (accept(","));
    return ctx;
  }

  ActorContext parse_ctx() {
    if (at("{")) {
      take();
      ActorContext ctx;
      if (!at("}")) ctx = parse_ctx_entries();
      expect("}");
      return ctx;
    }
    if (peek().kind == Tok::kIdent && !reserved().count(peek().text) && peek(1).text == ":")
      return parse_ctx_entries();
    return {};
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    std::set<std::string> seen;
    expect("(");
    if (!at(")")) {
      do {
        Token name = expect_ident("parameter name");
        if (!seen.insert(name.text).second)
          fail_at(name.loc, "duplicate parameter '" + name.text + "'");
        expect(":");
        params.push_back({name.text, parse_type()});
      } while (accept(","));
    }
    expect(")");
    return params;
  }

  // -- declarations ---------------------------------------------------------

  void parse_op_sig() {
    Token name = expect_ident("operation name");
    if (prog_.op(name.text)) fail_at(name.loc, "duplicate operation '" + name.text + "'");
    OpSig sig;
    sig.name = name.text;
    sig.loc = name.loc;
    sig.params = parse_params();
    expect(":");
    sig.result = parse_type();
    prog_.ops.push_back(std::move(sig));
  }

  void parse_actor() {
    Token name = expect_ident("actor name");
    if (prog_.actor(name.text)) fail_at(name.loc, "duplicate actor '" + name.text + "'");
    ActorDecl actor;
    actor.name = name.text;
    actor.loc = name.loc;
    expect("{");
    while (!at("}")) {
      Token mname = expect_ident("method name");
      for (const auto& m : actor.methods)
        if (m.name == mname.text)
          fail_at(mname.loc, "duplicate method '" + name.text + "." + mname.text + "'");
      MethodDecl method;
      method.name = mname.text;
      method.loc = mname.loc;
      method.params = parse_params();
      expect(":");
      method.result = parse_type();
      expect("requires");
      method.requires_ctx = ctx_normalize(parse_ctx());
      expect("produces");
      method.produces_ctx = ctx_normalize(parse_ctx());
      expect("measure");
      if (peek().kind != Tok::kNumber || peek().text == "∞") fail({"measure"});
      method.measure = std::stoull(take().text);
      expect("{");
      scope_.clear();
      for (const auto& p : method.params) scope_.push_back(p.name);
      method.body = parse_seq();
      expect("}");
      actor.methods.push_back(std::move(method));
    }
    expect("}");
    prog_.actors.push_back(std::move(actor));
  }

  void parse_init() {
    Token init = expect("init");
    prog_.init_loc = init.loc;
    prog_.init = ctx_normalize(parse_ctx());
    scope_.clear();
    while (accept(";")) {
      if (!at("start")) break;
      Token start = take();
      StartDecl s;
      s.loc = start.loc;
      s.actor = expect_ident("actor name").text;
      expect("!");
      s.method = expect_ident("method name").text;
      for (auto& ve : parse_args()) {
        auto* v = std::get_if<Value>(&ve);
        if (!v) fail_at(s.loc, "start arguments must be values");
        s.args.push_back(*v);
      }
      prog_.starts.push_back(std::move(s));
    }
    if (prog_.starts.empty()) fail({"'start'"});
  }

  // -- expressions ----------------------------------------------------------

  bool in_scope(const std::string& name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  ValueExpr parse_vexpr() {
    const Token& t = peek();
    if (t.kind == Tok::kIdent && t.text == "unit") {
      take();
      return Value(unit_value());
    }
    Token name = expect_ident("value expression");
    if (accept("^")) {
      Grade g = parse_grade();
      if (in_scope(name.text)) return GradedVar{name.text, g};
      return Value(resource_value(name.text, g));
    }
    if (!in_scope(name.text) && name.text.rfind("f#", 0) == 0 && fresh_index(name.text))
      return Value(future_value(name.text));
    return VarRef{name.text};
  }

  std::vector<ValueExpr> parse_args() {
    std::vector<ValueExpr> args;
    expect("(");
    if (!at(")")) {
      do args.push_back(parse_vexpr());
      while (accept(","));
    }
    expect(")");
    return args;
  }

  std::string seq_binder() { return std::string(1, kSeqBinderPrefix) + std::to_string(seq_++); }

  ExprPtr with_binder(const std::string& var, const std::function<ExprPtr()>& body) {
    scope_.push_back(var);
    ExprPtr e = body();
    scope_.pop_back();
    return e;
  }

  // seq := item (';' seq)?
  ExprPtr parse_seq() {
    SourceLoc loc = peek().loc;
    // `x = atom ; seq` binds x in the rest of the sequence.
    if (peek().kind == Tok::kIdent && !reserved().count(peek().text) && peek(1).text == "=") {
      std::string var = take().text;
      take();
      ExprPtr bound = parse_atom();
      expect(";");
      ExprPtr body = with_binder(var, [&] { return parse_seq(); });
      return make_let(var, bound, body, loc);
    }
    ExprPtr first = parse_item();
    if (!accept(";")) return first;
    std::string var = seq_binder();
    ExprPtr rest = with_binder(var, [&] { return parse_seq(); });
    return make_let(var, first, rest, loc);
  }

  ExprPtr parse_item() {
    if (at("let")) {
      SourceLoc loc = take().loc;
      std::string var = expect_ident("variable name").text;
      expect("=");
      ExprPtr bound = parse_seq();
      expect("in");
      ExprPtr body = with_binder(var, [&] { return parse_seq(); });
      return make_let(var, bound, body, loc);
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (at("return")) {
      take();
      return make_return(parse_vexpr(), loc);
    }
    if (at("hold")) {
      take();
      Grade g = parse_grade();
      std::string r = expect_ident("resource name").text;
      return make_hold(g, r, loc);
    }
    if (at("release")) {
      take();
      Grade g = parse_grade();
      return make_release(g, parse_vexpr(), loc);
    }
    if (at("(")) {
      take();
      ExprPtr first = parse_seq();
      if (at("(+)")) {
        std::vector<ExprPtr> branches{first};
        while (accept("(+)")) branches.push_back(parse_seq());
        expect(")");
        ExprPtr e = branches.back();
        for (std::size_t i = branches.size() - 1; i-- > 0;) e = make_choice(branches[i], e, loc);
        return e;
      }
      expect(")");
      return first;
    }
    if (t.kind == Tok::kIdent && !reserved().count(t.text) && peek(1).text == "!") {
      std::string actor = take().text;
      take();
      std::string method = expect_ident("method name").text;
      return make_call(actor, method, parse_args(), loc);
    }
    if (t.kind == Tok::kIdent && !reserved().count(t.text) && peek(1).text == "(") {
      std::string op = take().text;
      auto args = parse_args();
      if (const OpSig* sig = prog_.op(op); sig && sig->params.size() != args.size()) {
        fail_at(loc, "operation '" + op + "' expects " + std::to_string(sig->params.size()) +
                         " argument(s), got " + std::to_string(args.size()));
      }
      return make_primop(op, std::move(args), loc);
    }
    if (t.kind == Tok::kIdent && (t.text == "unit" || !reserved().count(t.text))) {
      ValueExpr ve = parse_vexpr();
      expect("?");
      return make_await(std::move(ve), loc);
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program& prog_;
  std::vector<std::string> scope_;
  std::uint64_t seq_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Program program;
  Parser parser(lex(text), program);
  parser.parse_program();
  return program;
}

ExprPtr parse_expr(std::string_view text, const Program& program,
                   const std::vector<std::string>& scope) {
  Program header = program;
  Parser parser(lex(text), header);
  return parser.parse_standalone(scope);
}

Value parse_value(std::string_view text, const GradeMonoid& m) {
  auto toks = lex(text);
  auto bad = [&](const Token& t) {
    return ParseError(t.loc, {"value"}, show(t), "expected value, found " + show(t));
  };
  if (toks.size() == 2 && toks[0].kind == Tok::kIdent) {
    if (toks[0].text == "unit") return unit_value();
    if (fresh_index(toks[0].text)) return future_value(toks[0].text);
  }
  if (toks.size() == 4 && toks[0].kind == Tok::kIdent && toks[1].text == "^") {
    if (auto g = m.parse(toks[2].text)) return resource_value(toks[0].text, *g);
    throw bad(toks[2]);
  }
  throw bad(toks[0]);
}

}  // namespace gract
