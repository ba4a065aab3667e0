#include "java_lexer.hpp"

#include "callwitness/error.hpp"

#include <array>
#include <cctype>

namespace callwitness::java {

namespace {

constexpr std::array<std::string_view, 38> kPunctuators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>", "(",
    ")",    "{",   "}",   "[",   "]",   ";",  ",",  ".",  "@",  "=",  "<",  ">",
};

constexpr std::string_view kSinglePunct = "!~?:+-*/&|^%";

bool ident_start(unsigned char c) noexcept { return std::isalpha(c) != 0 || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) noexcept { return ident_start(c) || std::isdigit(c) != 0; }

}  // namespace

void Lexer::fail(const std::string& why) const { throw Error(ErrorCode::unsupported_construct, why, line_); }

void Lexer::skip_trivia() {
    while (pos_ < src_.size()) {
        const char c = src_[pos_];
        if (c == '\n') {
            ++line_;
            ++pos_;
        } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++pos_;
        } else if (src_.compare(pos_, 2, "//") == 0) {
            while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        } else if (src_.compare(pos_, 2, "/*") == 0) {
            const size_t close = src_.find("*/", pos_ + 2);
            if (close == std::string_view::npos) fail("unterminated block comment");
            for (size_t i = pos_; i < close; ++i) line_ += src_[i] == '\n' ? 1 : 0;
            pos_ = close + 2;
        } else {
            break;
        }
    }
}

void Lexer::scan_quoted(char quote) {
    ++pos_;
    while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated literal");
        const char c = src_[pos_];
        if (c == '\\') {
            pos_ += 2;
            continue;
        }
        ++pos_;
        if (c == quote) return;
    }
}

void Lexer::scan_text_block() {
    pos_ += 3;
    while (true) {
        if (pos_ >= src_.size()) fail("unterminated text block");
        if (src_[pos_] == '\\') {
            pos_ += 2;
            continue;
        }
        if (src_[pos_] == '\n') ++line_;
        if (src_.compare(pos_, 3, "\"\"\"") == 0) {
            pos_ += 3;
            return;
        }
        ++pos_;
    }
}

Token Lexer::next() {
    skip_trivia();
    Token t;
    t.begin = pos_;
    t.line = line_;
    auto finish = [&](TokenKind kind) {
        t.kind = kind;
        t.end = pos_;
        t.text = src_.substr(t.begin, pos_ - t.begin);
        return t;
    };
    if (pos_ >= src_.size()) return finish(TokenKind::eof);
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (ident_start(c)) {
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        return finish(TokenKind::identifier);
    }
    if (std::isdigit(c) != 0 ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) != 0)) {
        // digits, hex, underscores, exponents, type suffixes
        while (pos_ < src_.size()) {
            const char d = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(d)) != 0 || d == '_' || d == '.') {
                if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') && pos_ + 1 < src_.size() &&
                    (src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-')) {
                    pos_ += 2;
                    continue;
                }
                if (d == '.' && (pos_ + 1 >= src_.size() || std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) == 0) &&
                    (pos_ + 1 < src_.size() && ident_start(static_cast<unsigned char>(src_[pos_ + 1])))) {
                    break;  // 1.toString is not a thing, but x[1].y must not swallow ".y"
                }
                ++pos_;
            } else {
                break;
            }
        }
        return finish(TokenKind::number);
    }
    if (src_.compare(pos_, 3, "\"\"\"") == 0) {
        scan_text_block();
        return finish(TokenKind::string);
    }
    if (c == '"') {
        scan_quoted('"');
        return finish(TokenKind::string);
    }
    if (c == '\'') {
        scan_quoted('\'');
        return finish(TokenKind::character);
    }
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view p : kPunctuators) {
        if (rest.substr(0, p.size()) == p) {
            pos_ += p.size();
            return finish(TokenKind::punct);
        }
    }
    if (kSinglePunct.find(static_cast<char>(c)) != std::string_view::npos) {
        ++pos_;
        return finish(TokenKind::punct);
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
}

}  // namespace callwitness::java
