#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spinel {

struct SourceLoc {
  std::string file;
  int line = 1;
  int col = 1;

  std::string str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

// Thrown by the lexer and the parsers. what() is the bare message; callers
// prepend the location when formatting diagnostics.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, SourceLoc where)
      : std::runtime_error(std::move(msg)), loc(std::move(where)) {}

  SourceLoc loc;
};

enum class ElabErrorKind {
  TypeMismatch,
  NotAFunction,
  UnboundVariable,
  UninferableLambda,
};

class ElabError : public std::runtime_error {
public:
  ElabError(ElabErrorKind k, std::string msg, SourceLoc where)
      : std::runtime_error(std::move(msg)), kind(k), loc(std::move(where)) {}

  static ElabError typeMismatch(const std::string& expected, const std::string& actual,
                                SourceLoc where) {
    ElabError e(ElabErrorKind::TypeMismatch,
                "type mismatch: expected " + expected + ", got " + actual, std::move(where));
    e.expected = expected;
    e.actual = actual;
    return e;
  }

  static ElabError notAFunction(const std::string& type, SourceLoc where) {
    return ElabError(ElabErrorKind::NotAFunction, "not a function: " + type, std::move(where));
  }

  static ElabError unbound(const std::string& name, SourceLoc where) {
    return ElabError(ElabErrorKind::UnboundVariable, "unbound identifier '" + name + "'",
                     std::move(where));
  }

  static ElabError uninferableLambda(SourceLoc where) {
    return ElabError(ElabErrorKind::UninferableLambda,
                     "cannot infer the type of a lambda; check it against a function type",
                     std::move(where));
  }

  ElabErrorKind kind;
  SourceLoc loc;
  std::string expected;  // TypeMismatch only
  std::string actual;    // TypeMismatch only
};

}  // namespace spinel
