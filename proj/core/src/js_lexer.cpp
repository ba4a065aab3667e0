#include "js_lexer.hpp"

#include "callwitness/error.hpp"

#include <array>
#include <cctype>

namespace callwitness::js {

namespace {

constexpr std::array<std::string_view, 52> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "<<",  ">>",  "**",
    "{",    "}",   "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "+",
    "-",    "*",   "/",   "%",   "&",   "|",   "^",   "!",
};

constexpr std::string_view kSinglePunct = "~?:=.@";

bool ident_start(unsigned char c) noexcept { return std::isalpha(c) != 0 || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) noexcept { return ident_start(c) || std::isdigit(c) != 0; }

}  // namespace

Lexer::Lexer(std::string_view source) : src_(source) {
    if (src_.substr(0, 2) == "#!") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }
}

void Lexer::fail(const std::string& why) const { throw Error(ErrorCode::unsupported_construct, why, line_); }

bool Lexer::skip_trivia() {
    bool nl = false;
    while (pos_ < src_.size()) {
        const char c = src_[pos_];
        if (c == '\n') {
            nl = true;
            ++line_;
            ++pos_;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++pos_;
        } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
            while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
            const size_t close = src_.find("*/", pos_ + 2);
            if (close == std::string_view::npos) fail("unterminated block comment");
            for (size_t i = pos_; i < close; ++i) {
                if (src_[i] == '\n') {
                    nl = true;
                    ++line_;
                }
            }
            pos_ = close + 2;
        } else if (static_cast<unsigned char>(c) == 0xC2 && pos_ + 1 < src_.size() &&
                   static_cast<unsigned char>(src_[pos_ + 1]) == 0xA0) {
            pos_ += 2;  // no-break space
        } else {
            break;
        }
    }
    return nl;
}

Token Lexer::make(TokenKind kind, size_t begin, int line, bool nl) {
    Token t;
    t.kind = kind;
    t.begin = begin;
    t.end = pos_;
    t.text = src_.substr(begin, pos_ - begin);
    t.line = line;
    t.newline_before = nl;
    return t;
}

void Lexer::scan_string(char quote) {
    ++pos_;
    while (true) {
        if (pos_ >= src_.size()) fail("unterminated string literal");
        const char c = src_[pos_];
        if (c == '\\') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++line_;
            pos_ += 2;
            continue;
        }
        if (c == '\n') fail("unterminated string literal");
        ++pos_;
        if (c == quote) return;
    }
}

void Lexer::scan_number() {
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos) {
        pos_ += 2;
        while (pos_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[pos_])) != 0 || src_[pos_] == '_')) {
            ++pos_;
        }
    } else {
        auto digits = [&] {
            while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0 || src_[pos_] == '_')) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])) != 0) {
                pos_ = p;
                digits();
            }
        }
    }
    if (pos_ < src_.size() && src_[pos_] == 'n') ++pos_;  // BigInt
    if (pos_ < src_.size() && ident_start(static_cast<unsigned char>(src_[pos_]))) fail("malformed numeric literal");
}

void Lexer::scan_identifier_tail() {
    while (pos_ < src_.size()) {
        const auto c = static_cast<unsigned char>(src_[pos_]);
        if (ident_part(c)) {
            ++pos_;
        } else if (c == '\\') {
            fail("unicode escapes in identifiers are outside the subset");
        } else {
            break;
        }
    }
}

Token Lexer::scan_template(size_t begin, int line, bool nl, bool continuation) {
    // pos_ is just past the opening backtick or the closing '}' of a substitution
    while (true) {
        if (pos_ >= src_.size()) fail("unterminated template literal");
        const char c = src_[pos_];
        if (c == '\\') {
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++line_;
            pos_ += 2;
            continue;
        }
        if (c == '\n') ++line_;
        if (c == '`') {
            ++pos_;
            return make(continuation ? TokenKind::template_tail : TokenKind::template_full, begin, line, nl);
        }
        if (c == '$' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '{') {
            pos_ += 2;
            braces_.push_back(true);
            return make(continuation ? TokenKind::template_middle : TokenKind::template_head, begin, line, nl);
        }
        ++pos_;
    }
}

Token Lexer::next() {
    const bool nl = skip_trivia();
    const size_t begin = pos_;
    const int line = line_;
    if (pos_ >= src_.size()) return make(TokenKind::eof, begin, line, nl);

    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (ident_start(c)) {
        ++pos_;
        scan_identifier_tail();
        return make(TokenKind::identifier, begin, line, nl);
    }
    if (c == '#') {
        ++pos_;
        if (pos_ >= src_.size() || !ident_start(static_cast<unsigned char>(src_[pos_]))) fail("stray '#'");
        scan_identifier_tail();
        return make(TokenKind::private_name, begin, line, nl);
    }
    if (std::isdigit(c) != 0 ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) != 0)) {
        scan_number();
        return make(TokenKind::number, begin, line, nl);
    }
    if (c == '"' || c == '\'') {
        scan_string(static_cast<char>(c));
        return make(TokenKind::string, begin, line, nl);
    }
    if (c == '`') {
        ++pos_;
        return scan_template(begin, line, nl, false);
    }
    if (c == '{') {
        braces_.push_back(false);
        ++pos_;
        return make(TokenKind::punct, begin, line, nl);
    }
    if (c == '}') {
        if (!braces_.empty()) {
            const bool into_template = braces_.back();
            braces_.pop_back();
            ++pos_;
            if (into_template) return scan_template(begin, line, nl, true);
        } else {
            ++pos_;
        }
        return make(TokenKind::punct, begin, line, nl);
    }
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view p : kPunctuators) {
        if (rest.substr(0, p.size()) == p) {
            // `a?.5:b` is a conditional, not optional chaining
            if (p == "?." && rest.size() > 2 && std::isdigit(static_cast<unsigned char>(rest[2])) != 0) continue;
            pos_ += p.size();
            return make(TokenKind::punct, begin, line, nl);
        }
    }
    if (kSinglePunct.find(static_cast<char>(c)) != std::string_view::npos) {
        ++pos_;
        return make(TokenKind::punct, begin, line, nl);
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
}

Token Lexer::rescan_regex(const Token& slash) {
    pos_ = slash.begin + 1;
    line_ = slash.line;
    bool in_class = false;
    while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated regular expression");
        const char c = src_[pos_];
        if (c == '\\') {
            pos_ += 2;
            continue;
        }
        ++pos_;
        if (c == '[') in_class = true;
        else if (c == ']') in_class = false;
        else if (c == '/' && !in_class) break;
    }
    while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;  // flags
    return make(TokenKind::regex, slash.begin, slash.line, slash.newline_before);
}

}  // namespace callwitness::js
