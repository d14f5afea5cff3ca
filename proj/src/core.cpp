#include "spinel/core.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "spinel/lexer.hpp"

namespace spinel {

namespace {
std::atomic<std::uint64_t> gVarCounter{0};
}

VarId freshVar(std::string name) { return VarId{++gVarCounter, std::move(name)}; }

TermPtr mkFnCall(std::string fn, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Term::Node{FnCall{std::move(fn), std::move(args)}});
}
TermPtr mkVar(VarId id) { return std::make_shared<Term>(Term::Node{Var{std::move(id)}}); }
TermPtr mkApp(TermPtr fun, TermPtr arg) {
  return std::make_shared<Term>(Term::Node{App{std::move(fun), std::move(arg)}});
}
TermPtr mkPi(VarId binder, TermPtr dom, TermPtr cod) {
  return std::make_shared<Term>(Term::Node{Pi{std::move(binder), std::move(dom), std::move(cod)}});
}
TermPtr mkLam(VarId binder, TermPtr body) {
  return std::make_shared<Term>(Term::Node{Lam{std::move(binder), std::move(body)}});
}

// --- Substitution ------------------------------------------------------------

Substitution Substitution::single(const VarId& var, TermPtr payload) {
  Substitution s;
  s.add(var, std::move(payload));
  return s;
}

void Substitution::add(const VarId& var, TermPtr payload) {
  if (lookup(var.uid) != nullptr)
    throw std::logic_error("substitution: duplicate key '" + var.name + "'");
  entries_.emplace_back(var, std::move(payload));
}

const TermPtr* Substitution::lookup(std::uint64_t uid) const {
  for (const auto& [key, payload] : entries_)
    if (key.uid == uid) return &payload;
  return nullptr;
}

Substitution Substitution::without(std::uint64_t uid) const {
  Substitution s;
  for (const auto& [key, payload] : entries_)
    if (key.uid != uid) s.entries_.emplace_back(key, payload);
  return s;
}

// --- free variables ----------------------------------------------------------

namespace {

void freeVarsRec(const TermPtr& t, std::vector<std::uint64_t>& bound,
                 std::set<std::uint64_t>& seen, std::vector<VarId>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FnCall>) {
          for (const auto& a : node.args) freeVarsRec(a, bound, seen, out);
        } else if constexpr (std::is_same_v<T, Var>) {
          if (std::find(bound.begin(), bound.end(), node.id.uid) == bound.end() &&
              seen.insert(node.id.uid).second) {
            out.push_back(node.id);
          }
        } else if constexpr (std::is_same_v<T, App>) {
          freeVarsRec(node.fun, bound, seen, out);
          freeVarsRec(node.arg, bound, seen, out);
        } else if constexpr (std::is_same_v<T, Pi>) {
          freeVarsRec(node.dom, bound, seen, out);
          bound.push_back(node.binder.uid);
          freeVarsRec(node.cod, bound, seen, out);
          bound.pop_back();
        } else if constexpr (std::is_same_v<T, Lam>) {
          bound.push_back(node.binder.uid);
          freeVarsRec(node.body, bound, seen, out);
          bound.pop_back();
        }
      },
      t->node());
}

}  // namespace

std::vector<VarId> freeVars(const TermPtr& term) {
  std::vector<std::uint64_t> bound;
  std::set<std::uint64_t> seen;
  std::vector<VarId> out;
  freeVarsRec(term, bound, seen, out);
  return out;
}

bool isFreeIn(std::uint64_t uid, const TermPtr& term) {
  for (const auto& v : freeVars(term))
    if (v.uid == uid) return true;
  return false;
}

// --- substitution ------------------------------------------------------------

namespace {

bool capturedByPayload(const Substitution& sigma, std::uint64_t binder) {
  for (const auto& [key, payload] : sigma.entries())
    if (isFreeIn(binder, payload)) return true;
  return false;
}

TermPtr substRec(const TermPtr& t, const Substitution& sigma) {
  if (sigma.empty()) return t;
  return std::visit(
      [&](const auto& node) -> TermPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FnCall>) {
          std::vector<TermPtr> args;
          args.reserve(node.args.size());
          for (const auto& a : node.args) args.push_back(substRec(a, sigma));
          return mkFnCall(node.fn, std::move(args));
        } else if constexpr (std::is_same_v<T, Var>) {
          if (const TermPtr* hit = sigma.lookup(node.id.uid)) return *hit;
          return t;
        } else if constexpr (std::is_same_v<T, App>) {
          return mkApp(substRec(node.fun, sigma), substRec(node.arg, sigma));
        } else if constexpr (std::is_same_v<T, Pi>) {
          TermPtr dom = substRec(node.dom, sigma);
          Substitution inner = sigma.without(node.binder.uid);
          if (inner.empty()) return mkPi(node.binder, std::move(dom), node.cod);
          if (!capturedByPayload(inner, node.binder.uid))
            return mkPi(node.binder, std::move(dom), substRec(node.cod, inner));
          VarId renamed = freshVar(node.binder.name);
          inner.add(node.binder, mkVar(renamed));
          return mkPi(renamed, std::move(dom), substRec(node.cod, inner));
        } else if constexpr (std::is_same_v<T, Lam>) {
          Substitution inner = sigma.without(node.binder.uid);
          if (inner.empty()) return t;
          if (!capturedByPayload(inner, node.binder.uid))
            return mkLam(node.binder, substRec(node.body, inner));
          VarId renamed = freshVar(node.binder.name);
          inner.add(node.binder, mkVar(renamed));
          return mkLam(renamed, substRec(node.body, inner));
        }
      },
      t->node());
}

}  // namespace

TermPtr substitute(const TermPtr& term, const Substitution& sigma) {
  return substRec(term, sigma);
}

TermPtr apply(const TermPtr& fun, const TermPtr& arg) {
  if (const Lam* lam = fun->asLam())
    return substitute(lam->body, Substitution::single(lam->binder, arg));
  return mkApp(fun, arg);
}

std::vector<TermPtr> vars(const Telescope& delta) {
  std::vector<TermPtr> out;
  out.reserve(delta.size());
  for (const auto& b : delta.bindings) out.push_back(mkVar(b.binder));
  return out;
}

TermPtr genLam(const TermPtr& body, const Telescope& delta) {
  TermPtr t = body;
  for (auto it = delta.bindings.rbegin(); it != delta.bindings.rend(); ++it)
    t = mkLam(it->binder, t);
  return t;
}

// --- alpha-equivalence -------------------------------------------------------

namespace {

bool alphaRec(const TermPtr& a, const TermPtr& b,
              std::vector<std::pair<std::uint64_t, std::uint64_t>>& env) {
  const auto& na = a->node();
  const auto& nb = b->node();
  if (na.index() != nb.index()) return false;

  if (const FnCall* fa = a->asFnCall()) {
    const FnCall* fb = b->asFnCall();
    if (fa->fn != fb->fn || fa->args.size() != fb->args.size()) return false;
    for (std::size_t i = 0; i < fa->args.size(); ++i)
      if (!alphaRec(fa->args[i], fb->args[i], env)) return false;
    return true;
  }
  if (const Var* va = a->asVar()) {
    const Var* vb = b->asVar();
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == va->id.uid) return it->second == vb->id.uid;
      if (it->second == vb->id.uid) return false;
    }
    return va->id.uid == vb->id.uid;  // both free
  }
  if (const App* pa = a->asApp()) {
    const App* pb = b->asApp();
    return alphaRec(pa->fun, pb->fun, env) && alphaRec(pa->arg, pb->arg, env);
  }
  if (const Pi* pa = a->asPi()) {
    const Pi* pb = b->asPi();
    if (!alphaRec(pa->dom, pb->dom, env)) return false;
    env.emplace_back(pa->binder.uid, pb->binder.uid);
    bool ok = alphaRec(pa->cod, pb->cod, env);
    env.pop_back();
    return ok;
  }
  const Lam* la = a->asLam();
  const Lam* lb = b->asLam();
  env.emplace_back(la->binder.uid, lb->binder.uid);
  bool ok = alphaRec(la->body, lb->body, env);
  env.pop_back();
  return ok;
}

}  // namespace

bool alphaEqual(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  return alphaRec(a, b, env);
}

// --- signatures ----------------------------------------------------------------

const Signature* SignatureTable::find(std::string_view name) const {
  for (const auto& s : sigs_)
    if (s.name == name) return &s;
  return nullptr;
}

void SignatureTable::add(Signature sig) {
  if (contains(sig.name)) throw std::logic_error("duplicate signature '" + sig.name + "'");
  sigs_.push_back(std::move(sig));
}

void SignatureTable::setDefinedBody(std::string_view name, TermPtr body) {
  for (auto& s : sigs_) {
    if (s.name == name) {
      s.body = DefinedBody{std::move(body)};
      return;
    }
  }
  throw std::logic_error("setDefinedBody: no signature named '" + std::string(name) + "'");
}

void SignatureTable::remove(std::string_view name) {
  sigs_.erase(std::remove_if(sigs_.begin(), sigs_.end(),
                             [&](const Signature& s) { return s.name == name; }),
              sigs_.end());
}

FnInstance instantiate(const Signature& sig) {
  Substitution theta;
  Telescope fresh;
  fresh.bindings.reserve(sig.params.size());
  for (const auto& b : sig.params.bindings) {
    VarId v = freshVar(b.binder.name);
    fresh.bindings.push_back({v, substitute(b.type, theta)});
    theta.add(b.binder, mkVar(v));
  }
  return {std::move(fresh), substitute(sig.returnType, theta)};
}

namespace {
TermPtr foldPi(const Telescope& delta, TermPtr ret) {
  for (auto it = delta.bindings.rbegin(); it != delta.bindings.rend(); ++it)
    ret = mkPi(it->binder, it->type, std::move(ret));
  return ret;
}
}  // namespace

TermPtr retTy(const Signature& sig) {
  if (sig.isTypeConstructor)
    throw std::logic_error("retTy: '" + sig.name + "' is a type constructor");
  return foldPi(sig.params, sig.returnType);
}

TermPtr retTy(const FnInstance& inst) { return foldPi(inst.params, inst.returnType); }

// --- exactly-applied checker ---------------------------------------------------

namespace {

void checkEaRec(const TermPtr& t, const SignatureTable& sigs, std::string& path,
                std::vector<ArityViolation>& out) {
  auto scoped = [&](const std::string& seg, const TermPtr& sub) {
    std::size_t n = path.size();
    path += seg;
    checkEaRec(sub, sigs, path, out);
    path.resize(n);
  };
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FnCall>) {
          const Signature* sig = sigs.find(node.fn);
          if (sig == nullptr) {
            out.push_back({ArityViolation::Kind::UnknownFunction, path.empty() ? "." : path,
                           node.fn, 0, node.args.size()});
          } else if (sig->arity() != node.args.size()) {
            out.push_back({ArityViolation::Kind::ArityMismatch, path.empty() ? "." : path,
                           node.fn, sig->arity(), node.args.size()});
          }
          for (std::size_t i = 0; i < node.args.size(); ++i)
            scoped(".args[" + std::to_string(i) + "]", node.args[i]);
        } else if constexpr (std::is_same_v<T, App>) {
          scoped(".fun", node.fun);
          scoped(".arg", node.arg);
        } else if constexpr (std::is_same_v<T, Pi>) {
          scoped(".dom", node.dom);
          scoped(".cod", node.cod);
        } else if constexpr (std::is_same_v<T, Lam>) {
          scoped(".body", node.body);
        }
      },
      t->node());
}

}  // namespace

std::vector<ArityViolation> checkExactlyApplied(const TermPtr& term, const SignatureTable& sigs) {
  std::vector<ArityViolation> out;
  std::string path;
  checkEaRec(term, sigs, path, out);
  return out;
}

// --- pretty-printer ------------------------------------------------------------

namespace {

void collectFnNames(const TermPtr& t, std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FnCall>) {
          out.insert(node.fn);
          for (const auto& a : node.args) collectFnNames(a, out);
        } else if constexpr (std::is_same_v<T, App>) {
          collectFnNames(node.fun, out);
          collectFnNames(node.arg, out);
        } else if constexpr (std::is_same_v<T, Pi>) {
          collectFnNames(node.dom, out);
          collectFnNames(node.cod, out);
        } else if constexpr (std::is_same_v<T, Lam>) {
          collectFnNames(node.body, out);
        }
      },
      t->node());
}

// Where a subterm sits in the output grammar: a full term, the left end of an
// application chain, or an argument slot (atom).
enum class Pos { Top, AppFun, AppArg };

class Printer {
public:
  explicit Printer(const TermPtr& root) {
    collectFnNames(root, fnNames_);
    for (const auto& v : freeVars(root)) names_[v.uid] = v.name.empty() ? "_" : v.name;
  }

  std::string render(const TermPtr& t, Pos pos) {
    return std::visit(
        [&](const auto& node) -> std::string {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, FnCall>) {
            if (node.args.empty()) return node.fn;
            std::string s = node.fn;
            for (const auto& a : node.args) {
              s += ' ';
              s += render(a, Pos::AppArg);
            }
            // A call on the left of a binary App keeps its parens so the
            // spine stays visually and grammatically apart: (f a b) c.
            return pos == Pos::Top ? s : paren(s);
          } else if constexpr (std::is_same_v<T, Var>) {
            auto it = names_.find(node.id.uid);
            return it != names_.end() ? it->second
                                      : (node.id.name.empty() ? "_" : node.id.name);
          } else if constexpr (std::is_same_v<T, App>) {
            std::string s = render(node.fun, Pos::AppFun);
            s += ' ';
            s += render(node.arg, Pos::AppArg);
            return pos == Pos::AppArg ? paren(s) : s;
          } else if constexpr (std::is_same_v<T, Pi>) {
            std::string name = pickName(node.binder, node.cod);
            std::string s = "(" + name + " : " + render(node.dom, Pos::Top) + ") -> ";
            s += withName(node.binder.uid, name, node.cod);
            return pos == Pos::Top ? s : paren(s);
          } else if constexpr (std::is_same_v<T, Lam>) {
            std::string name = pickName(node.binder, node.body);
            std::string s = "\\" + name + ". " + withName(node.binder.uid, name, node.body);
            return pos == Pos::Top ? s : paren(s);
          }
        },
        t->node());
  }

private:
  static std::string paren(const std::string& s) { return "(" + s + ")"; }

  // Renders `sub` with the binder visible under `name`, restoring any
  // shadowed assignment afterwards.
  std::string withName(std::uint64_t uid, const std::string& name, const TermPtr& sub) {
    auto it = names_.find(uid);
    std::optional<std::string> shadowed;
    if (it != names_.end()) shadowed = it->second;
    names_[uid] = name;
    std::string s = render(sub, Pos::Top);
    if (shadowed)
      names_[uid] = *shadowed;
    else
      names_.erase(uid);
    return s;
  }

  // Keep the retained hint unless it would capture a function name or a
  // variable that is actually visible in the binder's scope.
  std::string pickName(const VarId& binder, const TermPtr& scope) {
    std::string base = binder.name.empty() ? "_" : binder.name;
    std::vector<VarId> fv = freeVars(scope);
    auto clashes = [&](const std::string& cand) {
      if (fnNames_.count(cand) != 0) return true;
      for (const auto& v : fv) {
        if (v.uid == binder.uid) continue;
        auto it = names_.find(v.uid);
        const std::string& printed =
            it != names_.end() ? it->second : (v.name.empty() ? "_" : v.name);
        if (printed == cand) return true;
      }
      return false;
    };
    std::string cand = base;
    for (int i = 1; clashes(cand); ++i) cand = base + std::to_string(i);
    return cand;
  }

  std::set<std::string> fnNames_;
  std::unordered_map<std::uint64_t, std::string> names_;
};

}  // namespace

std::string prettyPrint(const TermPtr& term) {
  Printer p(term);
  return p.render(term, Pos::Top);
}

// --- core-text parser ----------------------------------------------------------

namespace {

class CoreParser {
public:
  CoreParser(std::string_view src, const SignatureTable& sigs, std::span<const VarId> frees)
      : toks_(lex(src, "<core>")), sigs_(sigs) {
    for (const auto& v : frees) frees_.push_back(v);
  }

  TermPtr parse() {
    TermPtr t = term();
    expect(Tok::End, "end of input");
    return t;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, SourceLoc{"<core>", at.line, at.col});
  }

  void expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail("expected " + what, peek());
    take();
  }

  TermPtr term() {
    if (peek().kind == Tok::Backslash) {
      take();
      if (peek().kind != Tok::Ident) fail("expected binder name", peek());
      std::string name = take().text;
      expect(Tok::Dot, "'.'");
      VarId binder = freshVar(name);
      scope_.push_back(binder);
      TermPtr body = term();
      scope_.pop_back();
      return mkLam(binder, body);
    }
    if (peek().kind == Tok::LParen && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      take();
      std::string name = take().text;
      take();  // ':'
      TermPtr dom = term();
      expect(Tok::RParen, "')'");
      expect(Tok::Arrow, "'->'");
      VarId binder = freshVar(name);
      scope_.push_back(binder);
      TermPtr cod = term();
      scope_.pop_back();
      return mkPi(binder, dom, cod);
    }
    return appGroup();
  }

  bool atomAhead() const {
    return peek().kind == Tok::Ident || peek().kind == Tok::LParen;
  }

  // app ::= atom atom*. The head decides how the group resolves: a function
  // name consumes exactly its arity from the spine, anything left over folds
  // into binary applications.
  TermPtr appGroup() {
    if (!atomAhead()) fail("expected a term", peek());

    Token headTok = peek();
    bool headIsIdent = headTok.kind == Tok::Ident;
    std::string headName;
    TermPtr headTerm;
    if (headIsIdent) {
      headName = take().text;
    } else {
      headTerm = atom();
    }

    std::vector<TermPtr> rest;
    while (atomAhead()) rest.push_back(atom());

    std::size_t consumed = 0;
    TermPtr t;
    if (headIsIdent) {
      if (const VarId* v = lookupName(headName)) {
        t = mkVar(*v);
      } else if (const Signature* sig = sigs_.find(headName)) {
        if (rest.size() < sig->arity())
          fail("function '" + headName + "' expects " + std::to_string(sig->arity()) +
                   " arguments, got " + std::to_string(rest.size()),
               headTok);
        std::vector<TermPtr> spine(rest.begin(), rest.begin() + sig->arity());
        t = mkFnCall(headName, std::move(spine));
        consumed = sig->arity();
      } else {
        fail("unknown identifier '" + headName + "'", headTok);
      }
    } else {
      t = headTerm;
    }
    for (std::size_t i = consumed; i < rest.size(); ++i) t = mkApp(t, rest[i]);
    return t;
  }

  TermPtr atom() {
    if (peek().kind == Tok::LParen) {
      take();
      TermPtr t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (peek().kind != Tok::Ident) fail("expected a term", peek());
    Token tok = take();
    if (const VarId* v = lookupName(tok.text)) return mkVar(*v);
    if (const Signature* sig = sigs_.find(tok.text)) {
      if (sig->arity() != 0)
        fail("function '" + tok.text + "' expects " + std::to_string(sig->arity()) +
                 " arguments, got 0",
             tok);
      return mkFnCall(tok.text, {});
    }
    fail("unknown identifier '" + tok.text + "'", tok);
  }

  // Binders shadow free variables shadow function names.
  const VarId* lookupName(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return &*it;
    for (const auto& v : frees_)
      if (v.name == name) return &v;
    return nullptr;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SignatureTable& sigs_;
  std::vector<VarId> scope_;
  std::vector<VarId> frees_;
};

}  // namespace

TermPtr parseCoreTerm(std::string_view src, const SignatureTable& sigs,
                      std::span<const VarId> freeVars) {
  CoreParser p(src, sigs, freeVars);
  return p.parse();
}

}  // namespace spinel
