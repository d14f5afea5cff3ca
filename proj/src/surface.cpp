#include "spinel/surface.hpp"

#include <algorithm>
#include <set>

#include "spinel/lexer.hpp"

namespace spinel {

SurfacePtr mkSRef(std::string name, SourceLoc loc) {
  return std::make_shared<SurfaceExpr>(SurfaceExpr{SRef{std::move(name)}, std::move(loc)});
}
SurfacePtr mkSFnRef(std::string name, SourceLoc loc) {
  return std::make_shared<SurfaceExpr>(SurfaceExpr{SFnRef{std::move(name)}, std::move(loc)});
}
SurfacePtr mkSLocalRef(std::string name, SourceLoc loc) {
  return std::make_shared<SurfaceExpr>(SurfaceExpr{SLocalRef{std::move(name)}, std::move(loc)});
}
SurfacePtr mkSApp(SurfacePtr fun, SurfacePtr arg, SourceLoc loc) {
  return std::make_shared<SurfaceExpr>(
      SurfaceExpr{SAppNode{std::move(fun), std::move(arg)}, std::move(loc)});
}
SurfacePtr mkSLam(std::string binder, SurfacePtr body, SourceLoc loc) {
  return std::make_shared<SurfaceExpr>(
      SurfaceExpr{SLamNode{std::move(binder), std::move(body)}, std::move(loc)});
}

STypePtr mkTNat(SourceLoc loc) {
  return std::make_shared<SurfaceType>(SurfaceType{TNat{}, std::move(loc)});
}
STypePtr mkTArrow(std::string binder, STypePtr dom, STypePtr cod, SourceLoc loc) {
  return std::make_shared<SurfaceType>(
      SurfaceType{TArrow{std::move(binder), std::move(dom), std::move(cod)}, std::move(loc)});
}

// --- parser ---------------------------------------------------------------

namespace {

class SurfaceParser {
public:
  SurfaceParser(std::string_view src, std::string file)
      : file_(std::move(file)), toks_(lex(src, file_)) {}

  std::vector<Declaration> file() {
    std::vector<Declaration> decls;
    std::set<std::string> seen;
    while (peek().kind != Tok::End) {
      Declaration d = decl();
      if (!seen.insert(d.name).second)
        throw ParseError("duplicate declaration '" + d.name + "'", d.loc);
      decls.push_back(std::move(d));
    }
    return decls;
  }

  SurfacePtr exprOnly() {
    SurfacePtr e = expr();
    expectEnd();
    return e;
  }

  STypePtr typeOnly() {
    STypePtr t = type();
    expectEnd();
    return t;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  SourceLoc locOf(const Token& t) const { return SourceLoc{file_, t.line, t.col}; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, locOf(at));
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail("expected " + what, peek());
    return take();
  }

  void expectEnd() {
    if (peek().kind != Tok::End) fail("unexpected trailing input", peek());
  }

  Declaration decl() {
    Token def = expect(Tok::KwDef, "'def'");
    Declaration d;
    d.loc = locOf(def);
    d.name = expect(Tok::Ident, "declaration name").text;

    std::set<std::string> paramNames;
    while (peek().kind == Tok::LParen) {
      take();
      Token nameTok = expect(Tok::Ident, "parameter name");
      expect(Tok::Colon, "':'");
      STypePtr ty = type();
      expect(Tok::RParen, "')'");
      if (!paramNames.insert(nameTok.text).second)
        fail("duplicate parameter '" + nameTok.text + "'", nameTok);
      d.params.push_back({nameTok.text, std::move(ty), locOf(nameTok)});
    }

    expect(Tok::Colon, "':'");
    d.returnType = type();

    if (peek().kind == Tok::Equals) {
      take();
      d.body = expr();
    } else if (peek().kind == Tok::KwPrimitive) {
      take();
      d.primitiveTag = expect(Tok::Ident, "primitive rule name").text;
    } else {
      fail("expected '=' or 'primitive'", peek());
    }
    return d;
  }

  // type ::= primary ("->" type)?   (right-associative sugar arrow)
  STypePtr type() {
    STypePtr lhs = typePrimary();
    if (peek().kind == Tok::Arrow) {
      Token arrow = take();
      return mkTArrow("", lhs, type(), locOf(arrow));
    }
    return lhs;
  }

  STypePtr typePrimary() {
    if (peek().kind == Tok::Ident) {
      Token t = take();
      if (t.text != "Nat") fail("unknown type '" + t.text + "'", t);
      return mkTNat(locOf(t));
    }
    if (peek().kind == Tok::LParen) {
      if (peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
        Token open = take();
        std::string binder = take().text;
        take();  // ':'
        STypePtr dom = type();
        expect(Tok::RParen, "')'");
        expect(Tok::Arrow, "'->'");
        return mkTArrow(std::move(binder), std::move(dom), type(), locOf(open));
      }
      take();
      STypePtr t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a type", peek());
  }

  SurfacePtr expr() {
    if (peek().kind == Tok::Backslash) {
      Token lam = take();
      std::string binder = expect(Tok::Ident, "binder name").text;
      expect(Tok::Dot, "'.'");
      return mkSLam(std::move(binder), expr(), locOf(lam));
    }
    return app();
  }

  bool atomAhead() const {
    Tok k = peek().kind;
    return k == Tok::Ident || k == Tok::Numeral || k == Tok::LParen;
  }

  SurfacePtr app() {
    if (!atomAhead()) fail("expected an expression", peek());
    SurfacePtr t = atom();
    while (atomAhead()) {
      SurfacePtr rhs = atom();
      SourceLoc loc = t->loc;
      t = mkSApp(std::move(t), std::move(rhs), std::move(loc));
    }
    return t;
  }

  SurfacePtr atom() {
    const Token& tok = peek();
    if (tok.kind == Tok::Ident) {
      Token t = take();
      return mkSRef(t.text, locOf(t));
    }
    if (tok.kind == Tok::Numeral) {
      Token t = take();
      return numeral(t);
    }
    if (tok.kind == Tok::LParen) {
      take();
      SurfacePtr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    fail("expected an expression", tok);
  }

  // NUMERAL n desugars to n applications of suc over zero.
  SurfacePtr numeral(const Token& tok) {
    unsigned long long n = 0;
    for (char c : tok.text) {
      if (n > (1ull << 20))
        fail("numeral too large", tok);
      n = n * 10 + static_cast<unsigned long long>(c - '0');
    }
    SourceLoc loc = locOf(tok);
    SurfacePtr t = mkSRef("zero", loc);
    for (unsigned long long i = 0; i < n; ++i) t = mkSApp(mkSRef("suc", loc), std::move(t), loc);
    return t;
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Declaration> parseFile(std::string_view src, const std::string& file) {
  SurfaceParser p(src, file);
  return p.file();
}

SurfacePtr parseExpr(std::string_view src, const std::string& file) {
  SurfaceParser p(src, file);
  return p.exprOnly();
}

STypePtr parseType(std::string_view src, const std::string& file) {
  SurfaceParser p(src, file);
  return p.typeOnly();
}

// --- resolution -------------------------------------------------------------

namespace {

SurfacePtr resolveRec(const SurfacePtr& e, const SignatureTable& sigs,
                      std::vector<std::string>& locals) {
  if (const SRef* ref = e->asRef()) {
    if (std::find(locals.rbegin(), locals.rend(), ref->name) != locals.rend())
      return mkSLocalRef(ref->name, e->loc);
    const Signature* sig = sigs.find(ref->name);
    if (sig != nullptr && !sig->isTypeConstructor) return mkSFnRef(ref->name, e->loc);
    throw ElabError::unbound(ref->name, e->loc);
  }
  if (const SAppNode* app = e->asApp()) {
    SurfacePtr fun = resolveRec(app->fun, sigs, locals);
    SurfacePtr arg = resolveRec(app->arg, sigs, locals);
    if (fun == app->fun && arg == app->arg) return e;
    return mkSApp(std::move(fun), std::move(arg), e->loc);
  }
  if (const SLamNode* lam = e->asLam()) {
    locals.push_back(lam->binder);
    SurfacePtr body = resolveRec(lam->body, sigs, locals);
    locals.pop_back();
    if (body == lam->body) return e;
    return mkSLam(lam->binder, std::move(body), e->loc);
  }
  return e;  // SFnRef / SLocalRef: already resolved
}

}  // namespace

SurfacePtr resolve(const SurfacePtr& expr, const SignatureTable& sigs,
                   std::span<const std::string> locals) {
  std::vector<std::string> scope(locals.begin(), locals.end());
  return resolveRec(expr, sigs, scope);
}

// --- printing ---------------------------------------------------------------

namespace {

const std::string& refName(const SurfaceExpr& e) {
  if (const SRef* r = e.asRef()) return r->name;
  if (const SFnRef* r = e.asFnRef()) return r->name;
  return e.asLocalRef()->name;
}

bool isRef(const SurfaceExpr& e) { return e.asApp() == nullptr && e.asLam() == nullptr; }

void printRec(const SurfacePtr& e, bool argPos, std::string& out) {
  if (isRef(*e)) {
    out += refName(*e);
    return;
  }
  if (const SAppNode* app = e->asApp()) {
    if (argPos) out += '(';
    printRec(app->fun, app->fun->asLam() != nullptr, out);
    out += ' ';
    printRec(app->arg, true, out);
    if (argPos) out += ')';
    return;
  }
  const SLamNode* lam = e->asLam();
  if (argPos) out += '(';
  out += '\\';
  out += lam->binder;
  out += ". ";
  printRec(lam->body, false, out);
  if (argPos) out += ')';
}

}  // namespace

std::string printSurface(const SurfacePtr& expr) {
  std::string out;
  printRec(expr, false, out);
  return out;
}

bool surfaceEqual(const SurfacePtr& a, const SurfacePtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (isRef(*a)) return refName(*a) == refName(*b);
  if (const SAppNode* aa = a->asApp()) {
    const SAppNode* ba = b->asApp();
    return surfaceEqual(aa->fun, ba->fun) && surfaceEqual(aa->arg, ba->arg);
  }
  const SLamNode* al = a->asLam();
  const SLamNode* bl = b->asLam();
  return al->binder == bl->binder && surfaceEqual(al->body, bl->body);
}

std::string dumpResolved(const SurfacePtr& expr) {
  if (const SRef* r = expr->asRef()) return "(ref " + r->name + ")";
  if (const SFnRef* r = expr->asFnRef()) return "(fnref " + r->name + ")";
  if (const SLocalRef* r = expr->asLocalRef()) return "(localref " + r->name + ")";
  if (const SAppNode* a = expr->asApp())
    return "(app " + dumpResolved(a->fun) + " " + dumpResolved(a->arg) + ")";
  const SLamNode* l = expr->asLam();
  return "(lam " + l->binder + " " + dumpResolved(l->body) + ")";
}

// --- prelude ----------------------------------------------------------------

namespace {

constexpr const char* kPreludeSource = R"(
-- built-in natural number primitives
def zero : Nat primitive natZero
def suc (x : Nat) : Nat primitive natSuc
def plus (x : Nat) (y : Nat) : Nat primitive natPlus
def max (x : Nat) (y : Nat) : Nat primitive natMax
)";

}  // namespace

std::vector<Declaration> preludeDecls() { return parseFile(kPreludeSource, "<prelude>"); }

}  // namespace spinel
