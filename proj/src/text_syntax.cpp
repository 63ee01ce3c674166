#include "kncond/text_syntax.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "kncond/error.hpp"

namespace kncond::syntax {

void Cursor::skip_ws() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

bool Cursor::at_end() {
  skip_ws();
  return pos_ >= text_.size();
}

char Cursor::peek() {
  skip_ws();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool Cursor::accept(char c) {
  if (peek() == c) {
    ++pos_;
    return true;
  }
  return false;
}

void Cursor::expect(char c) {
  if (!accept(c)) fail(std::string("expected '") + c + "'");
}

std::string Cursor::identifier() {
  skip_ws();
  const std::size_t start = pos_;
  if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
    fail("expected a name");
  }
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      ++pos_;
    } else {
      break;
    }
  }
  std::string id(text_.substr(start, pos_ - start));
  for (char& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return id;
}

double Cursor::number() {
  skip_ws();
  auto read = [this]() {
    skip_ws();
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  };
  double v = read();
  if (accept('/')) {
    const double d = read();
    if (d == 0.0) fail("division by zero in ratio");
    v /= d;
  }
  if (!std::isfinite(v)) fail("number must be finite");
  return v;
}

std::string Cursor::raw_argument() {
  skip_ws();
  const std::size_t start = pos_;
  int depth = 0;
  while (pos_ < text_.size()) {
    const char c = text_[pos_];
    if (c == '(') ++depth;
    if (c == ')') {
      if (depth == 0) break;
      --depth;
    }
    if (c == ',' && depth == 0) break;
    ++pos_;
  }
  std::string out(text_.substr(start, pos_ - start));
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

void Cursor::fail(const std::string& what) const {
  throw InputError("parse error at offset " + std::to_string(pos_) + " in \"" + std::string(text_) +
                   "\": " + what);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

}  // namespace kncond::syntax
