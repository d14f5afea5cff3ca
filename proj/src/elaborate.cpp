#include "spinel/elaborate.hpp"

#include <cassert>

#include "spinel/reduce.hpp"

namespace spinel {

const Context::Local* Context::lookup(std::string_view name) const {
  for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
    if (it->var.name == name) return &*it;
  return nullptr;
}

std::vector<std::string> Context::localNames() const {
  std::vector<std::string> names;
  names.reserve(locals_.size());
  for (const auto& l : locals_) names.push_back(l.var.name);
  return names;
}

namespace {

struct ScopedLocal {
  ScopedLocal(Context& ctx, VarId var, TermPtr type) : ctx_(ctx) {
    ctx_.push(std::move(var), std::move(type));
  }
  ~ScopedLocal() { ctx_.pop(); }
  ScopedLocal(const ScopedLocal&) = delete;
  ScopedLocal& operator=(const ScopedLocal&) = delete;

  Context& ctx_;
};

Signature natSignature() {
  Signature nat;
  nat.name = "Nat";
  nat.returnType = nullptr;
  nat.body = PrimitiveBody{"Nat"};
  nat.isTypeConstructor = true;
  return nat;
}

}  // namespace

TermPtr elabType(Context& ctx, const STypePtr& type) {
  if (type->asNat() != nullptr) return mkFnCall("Nat", {});
  const TArrow* arrow = type->asArrow();
  TermPtr dom = elabType(ctx, arrow->dom);
  VarId binder = freshVar(arrow->binder.empty() ? "_" : arrow->binder);
  ScopedLocal scope(ctx, binder, dom);
  return mkPi(binder, dom, elabType(ctx, arrow->cod));
}

Inferred infer(Context& ctx, const SurfacePtr& expr) {
  if (const SLocalRef* local = expr->asLocalRef()) {
    const Context::Local* hit = ctx.lookup(local->name);
    if (hit == nullptr) throw ElabError::unbound(local->name, expr->loc);
    return {mkVar(hit->var), hit->type};
  }

  if (const SFnRef* fn = expr->asFnRef()) {
    const Signature* sig = ctx.sigs().find(fn->name);
    if (sig == nullptr || sig->isTypeConstructor) throw ElabError::unbound(fn->name, expr->loc);
    // Fig-3 rule: f elaborates to \x1...xn. f x1 ... xn with the signature's
    // parameter names, freshened per use site.
    FnInstance inst = instantiate(*sig);
    TermPtr term = genLam(mkFnCall(fn->name, vars(inst.params)), inst.params);
    return {std::move(term), retTy(inst)};
  }

  if (const SAppNode* app = expr->asApp()) {
    Inferred head = infer(ctx, app->fun);
    TermPtr headTy = whnf(head.type, ctx.sigs());
    const Pi* pi = headTy->asPi();
    if (pi == nullptr) throw ElabError::notAFunction(prettyPrint(headTy), expr->loc);
    TermPtr arg = check(ctx, app->arg, pi->dom);
    TermPtr resultTy = substitute(pi->cod, Substitution::single(pi->binder, arg));
    return {apply(head.term, arg), std::move(resultTy)};
  }

  if (expr->asLam() != nullptr) throw ElabError::uninferableLambda(expr->loc);

  assert(expr->asRef() != nullptr);
  throw std::logic_error("infer: unresolved reference '" + expr->asRef()->name + "'");
}

TermPtr check(Context& ctx, const SurfacePtr& expr, const TermPtr& expected) {
  if (const SLamNode* lam = expr->asLam()) {
    TermPtr shape = whnf(expected, ctx.sigs());
    if (const Pi* pi = shape->asPi()) {
      VarId binder = freshVar(lam->binder);
      TermPtr bodyTy = substitute(pi->cod, Substitution::single(pi->binder, mkVar(binder)));
      ScopedLocal scope(ctx, binder, pi->dom);
      return mkLam(binder, check(ctx, lam->body, bodyTy));
    }
    // Falls through: a lambda against a non-Pi type fails in infer below.
  }

  Inferred inferred = infer(ctx, expr);
  if (!convertible(inferred.type, expected, ctx.sigs()))
    throw ElabError::typeMismatch(prettyPrint(expected), prettyPrint(inferred.type), expr->loc);
  return inferred.term;
}

ElabResult elabDecls(const std::vector<Declaration>& decls) {
  ElabResult result;
  result.sigs.add(natSignature());

  for (const Declaration& decl : decls) {
    if (result.sigs.contains(decl.name)) {
      result.errors.push_back({decl.name, "duplicate declaration '" + decl.name + "'", decl.loc});
      continue;
    }
    try {
      Context ctx(result.sigs);
      Telescope params;
      for (const DeclParam& p : decl.params) {
        TermPtr ty = elabType(ctx, p.type);
        VarId var = freshVar(p.name);
        params.bindings.push_back({var, ty});
        ctx.push(std::move(var), std::move(ty));
      }
      TermPtr returnType = elabType(ctx, decl.returnType);

      if (decl.primitiveTag) {
        const PrimRule* rule = findPrimRule(*decl.primitiveTag);
        if (rule != nullptr && rule->arity != params.size())
          throw ElabError(ElabErrorKind::TypeMismatch,
                          "primitive rule '" + *decl.primitiveTag + "' expects " +
                              std::to_string(rule->arity) + " parameters, got " +
                              std::to_string(params.size()),
                          decl.loc);
        result.sigs.add(
            {decl.name, std::move(params), std::move(returnType), PrimitiveBody{*decl.primitiveTag}});
        result.declared.push_back(decl.name);
        continue;
      }

      // Defined: make the signature visible provisionally so the body can
      // refer to the function itself.
      result.sigs.add({decl.name, params, returnType, DefinedBody{nullptr}});
      try {
        SurfacePtr resolved = resolve(*decl.body, result.sigs, ctx.localNames());
        TermPtr body = check(ctx, resolved, returnType);
        result.sigs.setDefinedBody(decl.name, std::move(body));
        result.declared.push_back(decl.name);
      } catch (...) {
        result.sigs.remove(decl.name);
        throw;
      }
    } catch (const ElabError& e) {
      result.errors.push_back({decl.name, "in declaration '" + decl.name + "': " + e.what(), e.loc});
    }
  }
  return result;
}

ElabResult elaborateProgram(const std::vector<Declaration>& userDecls) {
  std::vector<Declaration> decls = preludeDecls();
  decls.insert(decls.end(), userDecls.begin(), userDecls.end());
  return elabDecls(decls);
}

}  // namespace spinel
