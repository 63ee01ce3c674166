#pragma once

// Small recursive-descent helpers shared by the text syntaxes for monotone
// functions, gain functions and entropy frameworks.

#include <string>
#include <string_view>

namespace kncond::syntax {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws();
  bool at_end();
  // Consumes `c` if it is the next non-space character.
  bool accept(char c);
  void expect(char c);
  // Lower-case identifier made of [a-z0-9_-], starting with a letter.
  std::string identifier();
  // Decimal literal, optionally written as a ratio "a/b".
  double number();
  // Raw text up to (not including) the next unbalanced ')' or top-level ','.
  std::string raw_argument();
  char peek();
  [[noreturn]] void fail(const std::string& what) const;
  std::string_view text() const { return text_; }
  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace kncond::syntax
