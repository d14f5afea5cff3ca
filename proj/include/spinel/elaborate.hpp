#pragma once

#include <span>
#include <string>
#include <vector>

#include "spinel/core.hpp"
#include "spinel/diagnostics.hpp"
#include "spinel/surface.hpp"

namespace spinel {

// Local bindings plus the global signature table. Locals are looked up by
// name, innermost first, so inner binders shadow outer ones.
class Context {
public:
  struct Local {
    VarId var;
    TermPtr type;
  };

  explicit Context(const SignatureTable& sigs) : sigs_(&sigs) {}

  const SignatureTable& sigs() const { return *sigs_; }
  const Local* lookup(std::string_view name) const;
  void push(VarId var, TermPtr type) { locals_.push_back({std::move(var), std::move(type)}); }
  void pop() { locals_.pop_back(); }
  std::span<const Local> locals() const { return locals_; }
  std::vector<std::string> localNames() const;

private:
  std::vector<Local> locals_;
  const SignatureTable* sigs_;
};

struct Inferred {
  TermPtr term;
  TermPtr type;
};

/// Synthesis: local references, applications, and function references (which
/// elaborate to an eta-long exactly-applied call). Lambdas do not infer.
/// Throws ElabError.
Inferred infer(Context& ctx, const SurfacePtr& expr);

/// Checking: lambdas against Pi types; everything else infers and converts.
/// Throws ElabError.
TermPtr check(Context& ctx, const SurfacePtr& expr, const TermPtr& expected);

/// Surface type to core term; Nat becomes the built-in nullary type
/// constructor, arrows become Pi.
TermPtr elabType(Context& ctx, const STypePtr& type);

struct DeclDiagnostic {
  std::string decl;
  std::string message;
  SourceLoc loc;
};

struct ElabResult {
  SignatureTable sigs;
  std::vector<std::string> declared;  // successfully elaborated, in order
  std::vector<DeclDiagnostic> errors;
};

/// Elaborates declarations in order; each signature is visible to later
/// declarations (and provisionally to its own body, so recursive definitions
/// resolve). A failing declaration is reported and omitted; the rest are
/// still attempted. The table is seeded with the Nat type constructor.
ElabResult elabDecls(const std::vector<Declaration>& decls);

/// elabDecls over prelude + user declarations.
ElabResult elaborateProgram(const std::vector<Declaration>& userDecls);

}  // namespace spinel
