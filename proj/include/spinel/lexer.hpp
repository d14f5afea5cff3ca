#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spinel/diagnostics.hpp"

namespace spinel {

enum class Tok {
  Ident,
  Numeral,
  Backslash,
  Dot,
  LParen,
  RParen,
  Colon,
  Arrow,
  Equals,
  KwDef,
  KwPrimitive,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // payload for Ident and Numeral
  int line = 1;
  int col = 1;
};

/// Tokenizes the shared term/type/declaration syntax. `--` comments run to
/// end of line. Throws ParseError on stray characters.
std::vector<Token> lex(std::string_view src, const std::string& file);

}  // namespace spinel
