#include "lexer.hpp"

#include <array>
#include <cctype>
#include <string_view>

namespace barrierfix::detail {

namespace {

constexpr std::array<std::string_view, 17> kPunct = {
    "<<<", ">>>", "<=", ">=", "==", "!=", "&&", "||",  // multi-char first
    "+",   "-",   "*",  "/",  "%",  "<",  ">",  "!",  "="};
constexpr std::string_view kSingle = "()[]{},;";

class Cursor {
 public:
  Cursor(const std::string& text, const std::string& file) : text_(text) {
    loc_.file = file;
  }

  bool done() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  std::string_view rest() const { return std::string_view(text_).substr(pos_); }
  const SourceLoc& loc() const { return loc_; }

  void advance() {
    unsigned char c = static_cast<unsigned char>(text_[pos_++]);
    if (c == '\n') {
      ++loc_.line;
      loc_.col = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++loc_.col;
    }
    // continuation bytes of a multi-byte sequence do not advance the column;
    // the lead byte already did.
  }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  SourceLoc loc_;
};

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(const std::string& text, const std::string& file) {
  std::vector<Token> out;
  Cursor cur(text, file);
  while (!cur.done()) {
    char c = cur.peek();
    if (std::isspace(static_cast<unsigned char>(c))) {
      cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '/') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '*') {
      SourceLoc start = cur.loc();
      cur.advance(2);
      while (!cur.done() && !(cur.peek() == '*' && cur.peek(1) == '/')) cur.advance();
      if (cur.done()) throw ParseError(start, "unterminated block comment");
      cur.advance(2);
      continue;
    }
    SourceLoc loc = cur.loc();
    if (isIdentStart(c)) {
      std::string word;
      while (!cur.done() && isIdentChar(cur.peek())) {
        word.push_back(cur.peek());
        cur.advance();
      }
      out.push_back({TokenKind::Ident, std::move(word), loc});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        digits.push_back(cur.peek());
        cur.advance();
      }
      if (isIdentStart(cur.peek())) {
        throw ParseError(cur.loc(), "malformed integer literal");
      }
      out.push_back({TokenKind::Int, std::move(digits), loc});
      continue;
    }
    if (kSingle.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::Punct, std::string(1, c), loc});
      cur.advance();
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPunct) {
      if (cur.rest().substr(0, p.size()) == p) {
        out.push_back({TokenKind::Punct, std::string(p), loc});
        cur.advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(loc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({TokenKind::End, "", cur.loc()});
  return out;
}

}  // namespace barrierfix::detail
