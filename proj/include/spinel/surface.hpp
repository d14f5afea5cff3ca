#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinel/core.hpp"
#include "spinel/diagnostics.hpp"

namespace spinel {

struct SurfaceExpr;
using SurfacePtr = std::shared_ptr<const SurfaceExpr>;

// An identifier the resolver has not classified yet.
struct SRef {
  std::string name;
};

struct SFnRef {
  std::string name;
};

struct SLocalRef {
  std::string name;
};

struct SAppNode {
  SurfacePtr fun;
  SurfacePtr arg;
};

struct SLamNode {
  std::string binder;
  SurfacePtr body;
};

// Concrete syntax tree. Applications are always binary; numerals are gone by
// the time a tree exists (the parser desugars them to suc/zero chains).
struct SurfaceExpr {
  using Node = std::variant<SRef, SFnRef, SLocalRef, SAppNode, SLamNode>;

  Node node;
  SourceLoc loc;

  const SRef* asRef() const { return std::get_if<SRef>(&node); }
  const SFnRef* asFnRef() const { return std::get_if<SFnRef>(&node); }
  const SLocalRef* asLocalRef() const { return std::get_if<SLocalRef>(&node); }
  const SAppNode* asApp() const { return std::get_if<SAppNode>(&node); }
  const SLamNode* asLam() const { return std::get_if<SLamNode>(&node); }
};

SurfacePtr mkSRef(std::string name, SourceLoc loc);
SurfacePtr mkSFnRef(std::string name, SourceLoc loc);
SurfacePtr mkSLocalRef(std::string name, SourceLoc loc);
SurfacePtr mkSApp(SurfacePtr fun, SurfacePtr arg, SourceLoc loc);
SurfacePtr mkSLam(std::string binder, SurfacePtr body, SourceLoc loc);

// Surface types: Nat, dependent arrows, and the A -> B sugar (empty binder).
struct SurfaceType;
using STypePtr = std::shared_ptr<const SurfaceType>;

struct TNat {};

struct TArrow {
  std::string binder;  // empty for the non-dependent sugar
  STypePtr dom;
  STypePtr cod;
};

struct SurfaceType {
  std::variant<TNat, TArrow> node;
  SourceLoc loc;

  const TNat* asNat() const { return std::get_if<TNat>(&node); }
  const TArrow* asArrow() const { return std::get_if<TArrow>(&node); }
};

STypePtr mkTNat(SourceLoc loc);
STypePtr mkTArrow(std::string binder, STypePtr dom, STypePtr cod, SourceLoc loc);

struct DeclParam {
  std::string name;
  STypePtr type;
  SourceLoc loc;
};

// One `def`: exactly one of body / primitiveTag is set.
struct Declaration {
  std::string name;
  std::vector<DeclParam> params;
  STypePtr returnType;
  std::optional<SurfacePtr> body;
  std::optional<std::string> primitiveTag;
  SourceLoc loc;
};

/// Parses a declaration file. Throws ParseError (with position) on syntax
/// errors, duplicate declaration names, and duplicate parameter names.
std::vector<Declaration> parseFile(std::string_view src, const std::string& file);

/// Parses one expression; numerals desugar to suc/zero chains.
SurfacePtr parseExpr(std::string_view src, const std::string& file = "<expr>");

/// Parses one surface type.
STypePtr parseType(std::string_view src, const std::string& file = "<type>");

/// Classifies every SRef as local or function reference. Locals shadow
/// functions, inner binders shadow outer. Already-resolved nodes pass
/// through, so resolving twice is the identity. Type constructors (Nat) are
/// not functions and stay unresolvable in expression position.
SurfacePtr resolve(const SurfacePtr& expr, const SignatureTable& sigs,
                   std::span<const std::string> locals = {});

/// Renders an expression in the surface grammar (parseExpr inverts it).
std::string printSurface(const SurfacePtr& expr);

/// Structural equality, including resolution tags.
bool surfaceEqual(const SurfacePtr& a, const SurfacePtr& b);

/// One-line s-expression dump of a (resolved) tree, for --print-resolved.
std::string dumpResolved(const SurfacePtr& expr);

/// The built-in declarations: zero, suc, plus, max.
std::vector<Declaration> preludeDecls();

}  // namespace spinel
