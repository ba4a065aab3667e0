#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace callwitness::java {

enum class TokenKind { eof, identifier, number, string, character, punct };

struct Token {
    TokenKind kind = TokenKind::eof;
    std::string_view text;
    size_t begin = 0;
    size_t end = 0;
    int line = 1;

    bool is_punct(std::string_view p) const noexcept { return kind == TokenKind::punct && text == p; }
    bool is_word(std::string_view w) const noexcept { return kind == TokenKind::identifier && text == w; }
};

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    Token next();
    std::string_view source() const noexcept { return src_; }

private:
    [[noreturn]] void fail(const std::string& why) const;
    void skip_trivia();
    void scan_quoted(char quote);
    void scan_text_block();

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace callwitness::java
