#pragma once

#include <string>
#include <vector>

#include "barrierfix/minikernel.hpp"

namespace barrierfix::detail {

enum class TokenKind { Ident, Int, Punct, End };

struct Token {
  TokenKind kind;
  std::string text;
  SourceLoc loc;
};

// Splits MiniKernel source into tokens. Columns count Unicode code points.
std::vector<Token> tokenize(const std::string& text, const std::string& file);

}  // namespace barrierfix::detail
