#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spinel {

// Variables are identified by a globally fresh uid; the name is only a
// printing hint and never participates in equality or scoping.
struct VarId {
  std::uint64_t uid = 0;
  std::string name;
};

VarId freshVar(std::string name);

class Term;
using TermPtr = std::shared_ptr<const Term>;

// An exactly-applied function call: the spine length always equals the
// declared parameter count of the head (checkExactlyApplied verifies it).
struct FnCall {
  std::string fn;
  std::vector<TermPtr> args;
};

struct Var {
  VarId id;
};

// Binary application; used for non-function heads, e.g. over-application of
// a call's result.
struct App {
  TermPtr fun;
  TermPtr arg;
};

struct Pi {
  VarId binder;
  TermPtr dom;
  TermPtr cod;
};

struct Lam {
  VarId binder;
  TermPtr body;
};

// Immutable term node. Terms are shared freely; all operations on them are
// pure functions.
class Term {
public:
  using Node = std::variant<FnCall, Var, App, Pi, Lam>;

  explicit Term(Node n) : node_(std::move(n)) {}

  const Node& node() const { return node_; }
  const FnCall* asFnCall() const { return std::get_if<FnCall>(&node_); }
  const Var* asVar() const { return std::get_if<Var>(&node_); }
  const App* asApp() const { return std::get_if<App>(&node_); }
  const Pi* asPi() const { return std::get_if<Pi>(&node_); }
  const Lam* asLam() const { return std::get_if<Lam>(&node_); }

private:
  Node node_;
};

TermPtr mkFnCall(std::string fn, std::vector<TermPtr> args);
TermPtr mkVar(VarId id);
TermPtr mkApp(TermPtr fun, TermPtr arg);
TermPtr mkPi(VarId binder, TermPtr dom, TermPtr cod);
TermPtr mkLam(VarId binder, TermPtr body);

// Simultaneous substitution; each variable appears at most once as a key.
class Substitution {
public:
  Substitution() = default;

  static Substitution single(const VarId& var, TermPtr payload);

  // Throws std::logic_error on a duplicate key.
  void add(const VarId& var, TermPtr payload);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const TermPtr* lookup(std::uint64_t uid) const;
  Substitution without(std::uint64_t uid) const;
  const std::vector<std::pair<VarId, TermPtr>>& entries() const { return entries_; }

private:
  std::vector<std::pair<VarId, TermPtr>> entries_;
};

// Ordered, possibly dependent parameter bindings; later types may mention
// earlier binders.
struct TelescopeBinding {
  VarId binder;
  TermPtr type;
};

struct Telescope {
  std::vector<TelescopeBinding> bindings;

  std::size_t size() const { return bindings.size(); }
  bool empty() const { return bindings.empty(); }
};

struct PrimitiveBody {
  std::string ruleId;
};

struct DefinedBody {
  TermPtr body;  // scoped over the params telescope; elaborated, exactly-applied
};

struct Signature {
  std::string name;
  Telescope params;
  TermPtr returnType;  // scoped over params; null only for type constructors
  std::variant<PrimitiveBody, DefinedBody> body;
  bool isTypeConstructor = false;  // the built-in Nat

  std::size_t arity() const { return params.size(); }
  const PrimitiveBody* primitive() const { return std::get_if<PrimitiveBody>(&body); }
  const DefinedBody* defined() const { return std::get_if<DefinedBody>(&body); }
};

// Name -> Signature map preserving insertion order.
class SignatureTable {
public:
  const Signature* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Throws std::logic_error on duplicate names.
  void add(Signature sig);

  // Used by the declaration elaborator to patch a provisional entry once its
  // body has been checked (recursive definitions see themselves).
  void setDefinedBody(std::string_view name, TermPtr body);
  void remove(std::string_view name);

  const std::vector<Signature>& all() const { return sigs_; }

private:
  std::vector<Signature> sigs_;
};

// The parameter/return-type view of a function, with binders freshened so a
// use site never shares binder identities with the stored signature.
struct FnInstance {
  Telescope params;
  TermPtr returnType;
};

FnInstance instantiate(const Signature& sig);

// Folds the telescope into nested Pi types over the declared return type.
TermPtr retTy(const Signature& sig);
TermPtr retTy(const FnInstance& inst);

// --- operations ------------------------------------------------------------

// Capture-avoiding simultaneous substitution. FnCall spines keep their length.
TermPtr substitute(const TermPtr& term, const Substitution& sigma);

// Beta-aware application: apply(\x. b, v) = b[v/x]; otherwise App(u, v).
// Never inspects FnCall spines.
TermPtr apply(const TermPtr& fun, const TermPtr& arg);

// [Var x1, ..., Var xn] in telescope order.
std::vector<TermPtr> vars(const Telescope& delta);

// Wraps body in one lambda per telescope binder, outermost first.
TermPtr genLam(const TermPtr& body, const Telescope& delta);

// Free variables, each uid once, in first-occurrence order.
std::vector<VarId> freeVars(const TermPtr& term);
bool isFreeIn(std::uint64_t uid, const TermPtr& term);

bool alphaEqual(const TermPtr& a, const TermPtr& b);

struct ArityViolation {
  enum class Kind { ArityMismatch, UnknownFunction };

  Kind kind;
  std::string path;  // dot path from the root, "." for the root itself
  std::string fn;
  std::size_t expected = 0;  // meaningless for UnknownFunction
  std::size_t actual = 0;
};

// Empty iff every FnCall spine matches its head's declared parameter count.
// Unknown heads are reported rather than skipped.
std::vector<ArityViolation> checkExactlyApplied(const TermPtr& term, const SignatureTable& sigs);

// Deterministic, re-parseable rendering. Binder names come from the retained
// hints, freshened only when reuse would capture a visible name.
std::string prettyPrint(const TermPtr& term);

// Parses the prettyPrint grammar back into a term. Identifiers resolve to
// binders first, then to `freeVars` entries by name, then to functions in
// `sigs` (which must then be applied to exactly their arity).
TermPtr parseCoreTerm(std::string_view src, const SignatureTable& sigs,
                      std::span<const VarId> freeVars = {});

}  // namespace spinel
