#pragma once

// Tokenizer for the traceable JavaScript subset. Regular expressions are
// only recognised when the parser asks for one (primary-expression
// position), so the lexer itself never has to guess between '/' and a regex.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace callwitness::js {

enum class TokenKind {
    eof,
    identifier,  // includes keywords; the parser checks text
    private_name,
    punct,
    number,
    string,
    template_full,    // `...` without substitutions
    template_head,    // `...${
    template_middle,  // }...${
    template_tail,    // }...`
    regex,
};

struct Token {
    TokenKind kind = TokenKind::eof;
    std::string_view text;
    size_t begin = 0;
    size_t end = 0;
    int line = 1;
    bool newline_before = false;

    bool is(std::string_view p) const noexcept {
        return (kind == TokenKind::punct || kind == TokenKind::identifier) && text == p;
    }
    bool is_punct(std::string_view p) const noexcept { return kind == TokenKind::punct && text == p; }
    bool is_word(std::string_view w) const noexcept { return kind == TokenKind::identifier && text == w; }
};

class Lexer {
public:
    explicit Lexer(std::string_view source);

    Token next();
    /// Re-reads a '/' or '/=' token as a regular-expression literal.
    Token rescan_regex(const Token& slash);

    struct State {
        size_t pos;
        int line;
        std::vector<bool> braces;
    };
    State save() const { return {pos_, line_, braces_}; }
    void restore(State s) {
        pos_ = s.pos;
        line_ = s.line;
        braces_ = std::move(s.braces);
    }

    std::string_view source() const noexcept { return src_; }

private:
    [[noreturn]] void fail(const std::string& why) const;
    bool skip_trivia();  // returns true if a line terminator was crossed
    Token make(TokenKind kind, size_t begin, int line, bool nl);
    Token scan_template(size_t begin, int line, bool nl, bool continuation);
    void scan_string(char quote);
    void scan_number();
    void scan_identifier_tail();

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    // true entries mark a `${` that returns into a template literal
    std::vector<bool> braces_;
};

}  // namespace callwitness::js
