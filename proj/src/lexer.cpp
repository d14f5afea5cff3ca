#include "spinel/lexer.hpp"

#include <cctype>

namespace spinel {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identCont(char c) { return identStart(c) || std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> lex(std::string_view src, const std::string& file) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.col = col;

    if (identStart(c)) {
      std::size_t j = i;
      while (j < src.size() && identCont(src[j])) ++j;
      tok.text.assign(src.substr(i, j - i));
      if (tok.text == "def") {
        tok.kind = Tok::KwDef;
      } else if (tok.text == "primitive") {
        tok.kind = Tok::KwPrimitive;
      } else {
        tok.kind = Tok::Ident;
      }
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Tok::Numeral;
      tok.text.assign(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      tok.kind = Tok::Arrow;
      advance(2);
      out.push_back(std::move(tok));
      continue;
    }

    switch (c) {
      case '\\': tok.kind = Tok::Backslash; break;
      case '.': tok.kind = Tok::Dot; break;
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case ':': tok.kind = Tok::Colon; break;
      case '=': tok.kind = Tok::Equals; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         SourceLoc{file, line, col});
    }
    advance(1);
    out.push_back(std::move(tok));
  }

  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

}  // namespace spinel
