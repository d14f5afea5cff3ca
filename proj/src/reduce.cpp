#include "spinel/reduce.hpp"

#include <algorithm>
#include <vector>

namespace spinel {

namespace {

std::uint64_t stepPlus(std::span<const std::uint64_t> args) { return args[0] + args[1]; }
std::uint64_t stepMax(std::span<const std::uint64_t> args) { return std::max(args[0], args[1]); }

constexpr PrimRule kRules[] = {
    {"natPlus", 2, stepPlus},
    {"natMax", 2, stepMax},
};

}  // namespace

const PrimRule* findPrimRule(std::string_view ruleId) {
  for (const auto& r : kRules)
    if (r.ruleId == ruleId) return &r;
  return nullptr;
}

TermPtr numeralTerm(std::uint64_t n) {
  TermPtr t = mkFnCall("zero", {});
  for (std::uint64_t i = 0; i < n; ++i) t = mkFnCall("suc", {t});
  return t;
}

std::optional<std::uint64_t> numeralValue(const TermPtr& term) {
  std::uint64_t n = 0;
  const Term* t = term.get();
  for (;;) {
    const FnCall* call = t->asFnCall();
    if (call == nullptr) return std::nullopt;
    if (call->fn == "zero" && call->args.empty()) return n;
    if (call->fn == "suc" && call->args.size() == 1) {
      ++n;
      t = call->args[0].get();
      continue;
    }
    return std::nullopt;
  }
}

std::optional<TermPtr> deltaStep(const TermPtr& call, const SignatureTable& sigs,
                                 StepBudget* budget) {
  const FnCall* fc = call->asFnCall();
  if (fc == nullptr) throw std::logic_error("deltaStep: term is not a function call");
  const Signature* sig = sigs.find(fc->fn);
  if (sig == nullptr) throw std::logic_error("deltaStep: unknown function '" + fc->fn + "'");
  if (sig->arity() != fc->args.size())
    throw std::logic_error("deltaStep: call to '" + fc->fn + "' has " +
                           std::to_string(fc->args.size()) + " arguments, expected " +
                           std::to_string(sig->arity()) + " (corrupted core term)");

  if (const DefinedBody* def = sig->defined()) {
    Substitution sigma;
    for (std::size_t i = 0; i < fc->args.size(); ++i)
      sigma.add(sig->params.bindings[i].binder, fc->args[i]);
    if (budget != nullptr) budget->spend();
    return substitute(def->body, sigma);
  }

  const PrimRule* rule = findPrimRule(sig->primitive()->ruleId);
  if (rule == nullptr) return std::nullopt;  // canonical or opaque primitive

  std::vector<std::uint64_t> values;
  values.reserve(fc->args.size());
  for (const auto& arg : fc->args) {
    std::optional<std::uint64_t> v = numeralValue(normalize(arg, sigs, budget));
    if (!v) return std::nullopt;  // stuck on a non-canonical argument
    values.push_back(*v);
  }
  if (budget != nullptr) budget->spend();
  return numeralTerm(rule->step(values));
}

TermPtr whnf(TermPtr term, const SignatureTable& sigs, StepBudget* budget) {
  for (;;) {
    if (const App* app = term->asApp()) {
      TermPtr fun = whnf(app->fun, sigs, budget);
      if (const Lam* lam = fun->asLam()) {
        if (budget != nullptr) budget->spend();
        term = substitute(lam->body, Substitution::single(lam->binder, app->arg));
        continue;
      }
      return fun == app->fun ? term : mkApp(std::move(fun), app->arg);
    }
    if (term->asFnCall() != nullptr) {
      std::optional<TermPtr> next = deltaStep(term, sigs, budget);
      if (!next) return term;
      term = std::move(*next);
      continue;
    }
    return term;
  }
}

TermPtr normalize(const TermPtr& term, const SignatureTable& sigs, StepBudget* budget) {
  TermPtr w = whnf(term, sigs, budget);
  return std::visit(
      [&](const auto& node) -> TermPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FnCall>) {
          std::vector<TermPtr> args;
          args.reserve(node.args.size());
          for (const auto& a : node.args) args.push_back(normalize(a, sigs, budget));
          return mkFnCall(node.fn, std::move(args));
        } else if constexpr (std::is_same_v<T, Var>) {
          return w;
        } else if constexpr (std::is_same_v<T, App>) {
          return mkApp(normalize(node.fun, sigs, budget), normalize(node.arg, sigs, budget));
        } else if constexpr (std::is_same_v<T, Pi>) {
          return mkPi(node.binder, normalize(node.dom, sigs, budget),
                      normalize(node.cod, sigs, budget));
        } else if constexpr (std::is_same_v<T, Lam>) {
          return mkLam(node.binder, normalize(node.body, sigs, budget));
        }
      },
      w->node());
}

namespace {

bool convRec(const TermPtr& a, const TermPtr& b, const SignatureTable& sigs) {
  TermPtr wa = whnf(a, sigs);
  TermPtr wb = whnf(b, sigs);

  const Lam* la = wa->asLam();
  const Lam* lb = wb->asLam();
  if (la != nullptr && lb != nullptr) {
    TermPtr v = mkVar(freshVar(la->binder.name));
    return convRec(substitute(la->body, Substitution::single(la->binder, v)),
                   substitute(lb->body, Substitution::single(lb->binder, v)), sigs);
  }
  // Untyped eta: compare the lambda body against the other side applied to
  // the bound variable.
  if (la != nullptr) {
    TermPtr v = mkVar(freshVar(la->binder.name));
    return convRec(substitute(la->body, Substitution::single(la->binder, v)), apply(wb, v), sigs);
  }
  if (lb != nullptr) {
    TermPtr v = mkVar(freshVar(lb->binder.name));
    return convRec(apply(wa, v), substitute(lb->body, Substitution::single(lb->binder, v)), sigs);
  }

  if (wa->node().index() != wb->node().index()) return false;

  if (const FnCall* fa = wa->asFnCall()) {
    const FnCall* fb = wb->asFnCall();
    if (fa->fn != fb->fn || fa->args.size() != fb->args.size()) return false;
    for (std::size_t i = 0; i < fa->args.size(); ++i)
      if (!convRec(fa->args[i], fb->args[i], sigs)) return false;
    return true;
  }
  if (const Var* va = wa->asVar()) return va->id.uid == wb->asVar()->id.uid;
  if (const App* pa = wa->asApp()) {
    const App* pb = wb->asApp();
    return convRec(pa->fun, pb->fun, sigs) && convRec(pa->arg, pb->arg, sigs);
  }
  const Pi* pa = wa->asPi();
  const Pi* pb = wb->asPi();
  if (!convRec(pa->dom, pb->dom, sigs)) return false;
  TermPtr v = mkVar(freshVar(pa->binder.name));
  return convRec(substitute(pa->cod, Substitution::single(pa->binder, v)),
                 substitute(pb->cod, Substitution::single(pb->binder, v)), sigs);
}

}  // namespace

bool convertible(const TermPtr& a, const TermPtr& b, const SignatureTable& sigs) {
  return convRec(a, b, sigs);
}

}  // namespace spinel
