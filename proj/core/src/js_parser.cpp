#include "js_parser.hpp"

#include "js_lexer.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

namespace callwitness::js {

namespace {

constexpr size_t kNoSlot = static_cast<size_t>(-1);

const std::unordered_set<std::string_view> kBinaryPunct = {
    "+", "-", "*", "/", "%", "**", "==", "!=", "===", "!==", "<", ">", "<=", ">=",
    "&&", "||", "??", "&", "|", "^", "<<", ">>", ">>>",
};

const std::unordered_set<std::string_view> kAssignPunct = {
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "?\?=",
};

// words that can never begin an expression
const std::unordered_set<std::string_view> kStatementWords = {
    "break", "case",  "catch", "const",  "continue", "debugger", "default", "do",   "else",  "export",
    "extends", "finally", "for", "if", "return", "switch", "throw", "try", "var", "while", "with",
};

const std::unordered_set<std::string_view> kTimerApis = {"setTimeout", "setInterval", "setImmediate"};

bool is_use_strict(const Token& t) {
    return t.kind == TokenKind::string && (t.text == "'use strict'" || t.text == "\"use strict\"");
}

class Parser {
public:
    Parser(std::string_view source, std::string_view module_name) : lex_(source), module_(module_name) {
        if (!is_valid_segment(module_name)) {
            throw Error(ErrorCode::malformed_name, "module name '" + module_ + "' is not a valid name segment");
        }
        advance();
    }

    ParseResult run() {
        const std::string_view src = lex_.source();
        if (src.substr(0, 2) == "#!") {
            const size_t nl = src.find('\n');
            out_.prelude_offset = nl == std::string_view::npos ? src.size() : nl + 1;
        }
        out_.program_use_strict = is_use_strict(tok_);
        while (tok_.kind != TokenKind::eof) statement();
        std::stable_sort(out_.functions.begin(), out_.functions.end(),
                         [](const ParsedFunction& a, const ParsedFunction& b) { return a.begin < b.begin; });
        return std::move(out_);
    }

private:
    enum class Shape { other, ident, paren, async_call };

    // Binding context: a function, class or object literal starting exactly
    // at `begin` takes `path` as its name.
    struct Slot {
        size_t begin = kNoSlot;
        std::vector<std::string> path;
        FunctionKind kind = FunctionKind::arrow_const;
    };

    struct FnCtx {
        bool is_async = false;
    };

    // ---- token plumbing ----

    void advance() {
        prev_ = tok_;
        tok_ = lex_.next();
    }

    Token peek() {
        auto state = lex_.save();
        Token t = lex_.next();
        lex_.restore(std::move(state));
        return t;
    }

    [[noreturn]] void fail(const std::string& why) const { fail_at(why, tok_.line); }
    [[noreturn]] void fail_at(const std::string& why, int line) const {
        throw Error(ErrorCode::unsupported_construct, why, line);
    }

    void expect(std::string_view p) {
        if (!tok_.is_punct(p)) fail("expected '" + std::string(p) + "' but found '" + std::string(tok_.text) + "'");
        advance();
    }

    void consume_semicolon() {
        if (tok_.is_punct(";")) {
            advance();
            return;
        }
        if (tok_.is_punct("}") || tok_.kind == TokenKind::eof || tok_.newline_before) return;
        fail("expected ';' before '" + std::string(tok_.text) + "'");
    }

    bool at_terminator() const {
        return tok_.kind == TokenKind::eof || tok_.newline_before || tok_.is_punct(";") || tok_.is_punct(",") ||
               tok_.is_punct("}") || tok_.is_punct(")") || tok_.is_punct("]");
    }

    void check_binding_name(const Token& t) const {
        if (t.text.substr(0, 4) == "__cw") fail_at("identifiers starting with __cw are reserved", t.line);
    }

    // ---- inventory ----

    size_t register_fn(std::vector<std::string> segs, FunctionKind kind, const Token& start, bool is_async) {
        segs.insert(segs.begin(), module_);
        for (const auto& s : segs) {
            if (!is_valid_segment(s)) fail_at("function name segment '" + s + "' cannot be traced", start.line);
        }
        QualifiedName name(Language::javascript, std::move(segs));
        if (!names_.insert(name.text()).second) fail_at("duplicate function name " + name.text(), start.line);
        ParsedFunction fn{FunctionEntry{std::move(name), kind, {start.line, start.line}, {}}, start.begin};
        fn.is_async = is_async;
        out_.functions.push_back(std::move(fn));
        return out_.functions.size() - 1;
    }

    bool slot_matches(const Token& start) const { return start.begin == slot_.begin; }

    void named_value(std::vector<std::string> path, FunctionKind kind) {
        Slot saved = std::move(slot_);
        slot_ = Slot{tok_.begin, std::move(path), kind};
        assignment();
        slot_ = std::move(saved);
    }

    void check_bound_end() {
        if (!at_terminator()) fail("a bound function expression may not be used inside a larger expression");
    }

    // ---- function bodies ----

    void params() {
        const bool saved_no_in = no_in_;
        no_in_ = false;
        expect("(");
        while (!tok_.is_punct(")")) {
            if (tok_.is_punct("...")) advance();
            assignment();
            if (!tok_.is_punct(",")) break;
            advance();
        }
        expect(")");
        no_in_ = saved_no_in;
    }

    struct BodyScope {
        Parser& p;
        std::vector<std::string> saved_path;
        bool saved_no_in;
        BodyScope(Parser& parser, std::vector<std::string> path, bool is_async) : p(parser) {
            saved_path = std::exchange(p.path_, std::move(path));
            saved_no_in = std::exchange(p.no_in_, false);
            p.fns_.push_back(FnCtx{is_async});
            ++p.depth_;
        }
        ~BodyScope() {
            p.path_ = std::move(saved_path);
            p.no_in_ = saved_no_in;
            p.fns_.pop_back();
            --p.depth_;
        }
    };

    void block_body(size_t idx, std::vector<std::string> path) {
        if (!tok_.is_punct("{")) fail("expected function body");
        const size_t open = tok_.end;
        advance();
        const bool strict = is_use_strict(tok_);
        BodyScope scope(*this, std::move(path), out_.functions[idx].is_async);
        out_.functions[idx].depth = depth_;
        while (!tok_.is_punct("}")) {
            if (tok_.kind == TokenKind::eof) fail("unterminated function body");
            statement();
        }
        auto& fn = out_.functions[idx];
        fn.body_open = open;
        fn.body_close = tok_.begin;
        fn.use_strict = strict;
        fn.entry.span.end_line = tok_.line;
        advance();
    }

    void function_rest(size_t idx) {
        params();
        block_body(idx, inner_path(idx));
    }

    // `tok_` is at "=>"; params already consumed.
    void arrow(const Token& start, bool is_async) {
        if (tok_.newline_before) fail("line break before '=>'");
        advance();
        if (!slot_matches(start)) {
            fail_at("anonymous arrow functions are outside the traceable subset; bind them to a name", start.line);
        }
        const size_t idx = register_fn(slot_.path, slot_.kind, start, is_async);
        if (tok_.is_punct("{")) {
            block_body(idx, inner_path(idx));
        } else {
            const size_t open = tok_.begin;
            {
                BodyScope scope(*this, inner_path(idx), is_async);
                out_.functions[idx].depth = depth_;
                assignment();
            }
            auto& fn = out_.functions[idx];
            fn.concise = true;
            fn.body_open = open;
            fn.body_close = prev_.end;
            fn.entry.span.end_line = prev_.line;
        }
        check_bound_end();
    }

    std::vector<std::string> inner_path(size_t idx) const {
        auto segs = out_.functions[idx].entry.name.segments();
        segs.erase(segs.begin());
        return segs;
    }

    void function_expr(const Token& start, bool is_async) {
        advance();  // function
        if (tok_.is_punct("*")) fail("generators are outside the traceable subset");
        std::optional<Token> own;
        if (tok_.kind == TokenKind::identifier) {
            check_binding_name(tok_);
            own = tok_;
            advance();
        }
        const bool bound = slot_matches(start);
        std::vector<std::string> segs;
        FunctionKind kind = FunctionKind::arrow_const;
        if (bound) {
            segs = slot_.path;
            kind = slot_.kind;
        } else if (own) {
            segs = path_;
            segs.emplace_back(own->text);
        } else {
            fail_at("anonymous function expressions are outside the traceable subset; bind them to a name", start.line);
        }
        const size_t idx = register_fn(std::move(segs), kind, start, is_async);
        params();
        block_body(idx, inner_path(idx));
        if (bound) check_bound_end();
    }

    void function_decl(const Token& start, bool is_async) {
        advance();  // function
        if (tok_.is_punct("*")) fail("generators are outside the traceable subset");
        if (tok_.kind != TokenKind::identifier) fail("expected function name");
        check_binding_name(tok_);
        auto segs = path_;
        segs.emplace_back(tok_.text);
        advance();
        const size_t idx = register_fn(std::move(segs), FunctionKind::function_decl, start, is_async);
        params();
        block_body(idx, inner_path(idx));
    }

    // ---- classes and object literals ----

    std::string property_key(const Token& t) const {
        if (t.kind == TokenKind::string) return std::string(t.text.substr(1, t.text.size() - 2));
        return std::string(t.text);
    }

    bool is_property_name(const Token& t) const {
        return t.kind == TokenKind::identifier || t.kind == TokenKind::string || t.kind == TokenKind::number ||
               t.kind == TokenKind::private_name;
    }

    // A modifier word (static/async/get/set) is a modifier only when another
    // property name follows it.
    bool modifier_applies(const Token& next) const {
        return !(next.is_punct("(") || next.is_punct("=") || next.is_punct(";") || next.is_punct("}") ||
                 next.is_punct(",") || next.is_punct(":"));
    }

    void class_body(const std::vector<std::string>& path) {
        expect("{");
        const auto saved_path = std::exchange(path_, path);
        while (!tok_.is_punct("}")) {
            if (tok_.kind == TokenKind::eof) fail("unterminated class body");
            if (tok_.is_punct(";")) {
                advance();
                continue;
            }
            const Token start = tok_;
            bool is_static = false;
            bool is_async = false;
            if (tok_.is_word("static") && modifier_applies(peek())) {
                advance();
                if (tok_.is_punct("{")) fail("static initialization blocks are outside the traceable subset");
                is_static = true;
            }
            if (tok_.is_word("async")) {
                const Token next = peek();
                if (modifier_applies(next) && !next.newline_before) {
                    advance();
                    is_async = true;
                }
            }
            if (tok_.is_punct("*")) fail("generator methods are outside the traceable subset");
            if ((tok_.is_word("get") || tok_.is_word("set")) && modifier_applies(peek())) {
                fail("getters and setters are outside the traceable subset");
            }
            if (tok_.is_punct("[")) fail("computed member names are outside the traceable subset");
            if (!is_property_name(tok_)) fail("unexpected '" + std::string(tok_.text) + "' in class body");
            const std::string key = property_key(tok_);
            advance();
            auto segs = path;
            segs.push_back(key);
            if (tok_.is_punct("(")) {
                const auto kind = (!is_static && key == "constructor") ? FunctionKind::class_constructor
                                                                        : FunctionKind::class_method;
                const size_t idx = register_fn(std::move(segs), kind, start, is_async);
                function_rest(idx);
                continue;
            }
            if (is_async) fail("expected method after 'async'");
            if (tok_.is_punct("=")) {
                advance();
                named_value(std::move(segs), FunctionKind::class_method);
            }
            consume_semicolon();
        }
        advance();
        path_ = saved_path;
    }

    void class_heritage() {
        if (tok_.is_word("extends")) {
            advance();
            lhs_expr();
        }
    }

    void class_decl() {
        advance();  // class
        if (tok_.kind != TokenKind::identifier) fail("expected class name");
        check_binding_name(tok_);
        auto path = path_;
        path.emplace_back(tok_.text);
        advance();
        class_heritage();
        class_body(path);
    }

    void class_expr(const Token& start) {
        advance();  // class
        std::optional<std::string> own;
        if (tok_.kind == TokenKind::identifier && !tok_.is_word("extends")) {
            check_binding_name(tok_);
            own = std::string(tok_.text);
            advance();
        }
        const bool bound = slot_matches(start);
        std::vector<std::string> path;
        if (bound) {
            path = slot_.path;
        } else if (own) {
            path = path_;
            path.push_back(*own);
        } else {
            fail_at("anonymous class expressions are outside the traceable subset", start.line);
        }
        class_heritage();
        class_body(path);
        if (bound) check_bound_end();
    }

    void object_literal(const std::optional<std::vector<std::string>>& path) {
        const bool saved_no_in = std::exchange(no_in_, false);
        expect("{");
        while (!tok_.is_punct("}")) {
            if (tok_.kind == TokenKind::eof) fail("unterminated object literal");
            const Token start = tok_;
            if (tok_.is_punct("...")) {
                advance();
                assignment();
            } else {
                bool is_async = false;
                if (tok_.is_word("async")) {
                    const Token next = peek();
                    if (modifier_applies(next) && !next.newline_before) {
                        advance();
                        is_async = true;
                    }
                }
                if (tok_.is_punct("*")) fail("generator methods are outside the traceable subset");
                if ((tok_.is_word("get") || tok_.is_word("set")) && modifier_applies(peek())) {
                    fail("getters and setters are outside the traceable subset");
                }
                if (tok_.is_punct("[")) {
                    advance();
                    assignment();
                    expect("]");
                    if (tok_.is_punct("(")) fail("computed member names are outside the traceable subset");
                    expect(":");
                    assignment();
                } else {
                    if (!is_property_name(tok_) || tok_.kind == TokenKind::private_name) {
                        fail("unexpected '" + std::string(tok_.text) + "' in object literal");
                    }
                    const Token key_tok = tok_;
                    const std::string key = property_key(tok_);
                    advance();
                    if (tok_.is_punct("(")) {
                        if (!path) fail_at("methods of unbound object literals are anonymous; bind the object to a name", start.line);
                        auto segs = *path;
                        segs.push_back(key);
                        const size_t idx = register_fn(std::move(segs), FunctionKind::class_method, start, is_async);
                        function_rest(idx);
                    } else if (is_async) {
                        fail("expected method after 'async'");
                    } else if (tok_.is_punct(":")) {
                        advance();
                        if (path) {
                            auto segs = *path;
                            segs.push_back(key);
                            named_value(std::move(segs), FunctionKind::arrow_const);
                        } else {
                            assignment();
                        }
                    } else {
                        if (key_tok.kind != TokenKind::identifier) fail("expected ':' after property key");
                        check_identifier(key_tok);
                        if (tok_.is_punct("=")) {  // destructuring default
                            advance();
                            assignment();
                        }
                    }
                }
            }
            if (!tok_.is_punct(",")) break;
            advance();
        }
        expect("}");
        no_in_ = saved_no_in;
    }

    // ---- statements ----

    void block() {
        expect("{");
        while (!tok_.is_punct("}")) {
            if (tok_.kind == TokenKind::eof) fail("unterminated block");
            statement();
        }
        advance();
    }

    void binding_target() {
        if (tok_.kind == TokenKind::identifier) {
            if (kStatementWords.count(tok_.text) != 0) fail("unexpected '" + std::string(tok_.text) + "'");
            check_identifier(tok_);
            advance();
        } else if (tok_.is_punct("[") || tok_.is_punct("{")) {
            primary();
        } else {
            fail("expected binding name");
        }
    }

    // Returns true if the declaration turned out to be a for-in/of head.
    bool var_decl(bool in_for_head) {
        advance();  // var/let/const
        while (true) {
            const Token target = tok_;
            binding_target();
            if (in_for_head && (tok_.is_word("of") || tok_.is_word("in"))) return true;
            if (tok_.is_punct("=")) {
                advance();
                if (target.kind == TokenKind::identifier) {
                    auto path = path_;
                    path.emplace_back(target.text);
                    named_value(std::move(path), FunctionKind::arrow_const);
                } else {
                    assignment();
                }
            }
            if (!tok_.is_punct(",")) break;
            advance();
        }
        return false;
    }

    bool starts_let_declaration() {
        if (!tok_.is_word("let")) return false;
        const Token next = peek();
        return next.kind == TokenKind::identifier || next.is_punct("[") || next.is_punct("{");
    }

    void for_statement() {
        advance();  // for
        if (tok_.is_word("await")) fail("'for await' is outside the traceable subset");
        expect("(");
        bool in_of = false;
        no_in_ = true;
        if (tok_.is_punct(";")) {
            // empty init
        } else if (tok_.is_word("var") || tok_.is_word("const") || starts_let_declaration()) {
            in_of = var_decl(true);
        } else {
            expression();
            in_of = tok_.is_word("of") || tok_.is_word("in");
        }
        no_in_ = false;
        if (in_of) {
            advance();
            assignment();
        } else {
            expect(";");
            if (!tok_.is_punct(";")) expression();
            expect(";");
            if (!tok_.is_punct(")")) expression();
        }
        expect(")");
        statement();
    }

    void statement() {
        if (tok_.is_punct("{")) {
            block();
            return;
        }
        if (tok_.is_punct(";")) {
            advance();
            return;
        }
        if (tok_.kind == TokenKind::identifier) {
            const std::string_view w = tok_.text;
            if (w == "var" || w == "const" || starts_let_declaration()) {
                var_decl(false);
                consume_semicolon();
                return;
            }
            if (w == "function") {
                function_decl(tok_, false);
                return;
            }
            if (w == "async") {
                const Token next = peek();
                if (next.is_word("function") && !next.newline_before) {
                    const Token start = tok_;
                    advance();
                    function_decl(start, true);
                    return;
                }
            }
            if (w == "class") {
                class_decl();
                return;
            }
            if (w == "if") {
                advance();
                paren_expression();
                statement();
                if (tok_.is_word("else")) {
                    advance();
                    statement();
                }
                return;
            }
            if (w == "for") {
                for_statement();
                return;
            }
            if (w == "while") {
                advance();
                paren_expression();
                statement();
                return;
            }
            if (w == "do") {
                advance();
                statement();
                if (!tok_.is_word("while")) fail("expected 'while' after do body");
                advance();
                paren_expression();
                if (tok_.is_punct(";")) advance();
                return;
            }
            if (w == "return") {
                advance();
                if (!tok_.is_punct(";") && !tok_.is_punct("}") && tok_.kind != TokenKind::eof && !tok_.newline_before) {
                    expression();
                }
                consume_semicolon();
                return;
            }
            if (w == "throw") {
                advance();
                if (tok_.newline_before) fail("line break after 'throw'");
                expression();
                consume_semicolon();
                return;
            }
            if (w == "break" || w == "continue") {
                advance();
                if (tok_.kind == TokenKind::identifier && !tok_.newline_before) advance();
                consume_semicolon();
                return;
            }
            if (w == "try") {
                advance();
                block();
                if (tok_.is_word("catch")) {
                    advance();
                    if (tok_.is_punct("(")) {
                        advance();
                        binding_target();
                        expect(")");
                    }
                    block();
                }
                if (tok_.is_word("finally")) {
                    advance();
                    block();
                }
                return;
            }
            if (w == "switch") {
                advance();
                paren_expression();
                expect("{");
                while (!tok_.is_punct("}")) {
                    if (tok_.is_word("case")) {
                        advance();
                        expression();
                        expect(":");
                    } else if (tok_.is_word("default")) {
                        advance();
                        expect(":");
                    } else if (tok_.kind == TokenKind::eof) {
                        fail("unterminated switch");
                    } else {
                        statement();
                    }
                }
                advance();
                return;
            }
            if (w == "with") fail("'with' is outside the traceable subset");
            if (w == "import" || w == "export") fail("modules (import/export) are outside the traceable subset");
            if (w == "debugger") {
                advance();
                consume_semicolon();
                return;
            }
            if (kStatementWords.count(w) == 0 && peek().is_punct(":")) {  // label
                advance();
                advance();
                statement();
                return;
            }
        }
        expression();
        consume_semicolon();
    }

    void paren_expression() {
        expect("(");
        const bool saved = std::exchange(no_in_, false);
        expression();
        no_in_ = saved;
        expect(")");
    }

    // ---- expressions ----

    void expression() {
        assignment();
        while (tok_.is_punct(",")) {
            advance();
            assignment();
        }
    }

    Shape assignment() {
        if (tok_.is_word("yield")) fail("generators are outside the traceable subset");
        const Token start = tok_;
        if (tok_.is_word("async")) {
            const Token next = peek();
            if (next.kind == TokenKind::identifier && !next.newline_before && !next.is_word("function")) {
                advance();
                check_identifier(tok_);
                advance();
                if (!tok_.is_punct("=>")) fail("expected '=>' after async arrow parameter");
                arrow(start, true);
                return Shape::other;
            }
        }
        const Shape lhs = conditional();
        if (tok_.is_punct("=>")) {
            if (lhs == Shape::other) fail("invalid arrow function parameters");
            arrow(start, lhs == Shape::async_call);
            return Shape::other;
        }
        if (tok_.kind == TokenKind::punct && kAssignPunct.count(tok_.text) != 0) {
            advance();
            assignment();
            return Shape::other;
        }
        return lhs;
    }

    Shape conditional() {
        const Shape s = binary();
        if (!tok_.is_punct("?")) return s;
        advance();
        const bool saved = std::exchange(no_in_, false);
        assignment();
        no_in_ = saved;
        expect(":");
        assignment();
        return Shape::other;
    }

    bool at_binary_operator() const {
        if (tok_.kind == TokenKind::punct) return kBinaryPunct.count(tok_.text) != 0;
        if (tok_.is_word("instanceof")) return true;
        return tok_.is_word("in") && !no_in_;
    }

    Shape binary() {
        Shape s = unary();
        while (at_binary_operator()) {
            advance();
            unary();
            s = Shape::other;
        }
        return s;
    }

    Shape unary() {
        if (tok_.kind == TokenKind::punct &&
            (tok_.text == "!" || tok_.text == "~" || tok_.text == "+" || tok_.text == "-" || tok_.text == "++" ||
             tok_.text == "--")) {
            advance();
            unary();
            return Shape::other;
        }
        if (tok_.is_word("typeof") || tok_.is_word("void") || tok_.is_word("delete")) {
            advance();
            unary();
            return Shape::other;
        }
        if (tok_.is_word("await")) {
            if (fns_.empty()) fail("top-level await is outside the traceable subset");
            if (!fns_.back().is_async) fail("'await' outside an async function");
            AwaitSite site;
            site.begin = tok_.begin;
            site.after_keyword = tok_.end;
            advance();
            ++depth_;
            site.depth = depth_;
            unary();
            --depth_;
            site.operand_end = prev_.end;
            out_.awaits.push_back(site);
            return Shape::other;
        }
        const Shape s = lhs_expr();
        if ((tok_.is_punct("++") || tok_.is_punct("--")) && !tok_.newline_before) {
            advance();
            return Shape::other;
        }
        return s;
    }

    void arguments() {
        const bool saved = std::exchange(no_in_, false);
        expect("(");
        while (!tok_.is_punct(")")) {
            if (tok_.is_punct("...")) advance();
            assignment();
            if (!tok_.is_punct(",")) break;
            advance();
        }
        expect(")");
        no_in_ = saved;
    }

    void member_name() {
        if (tok_.kind != TokenKind::identifier && tok_.kind != TokenKind::private_name) fail("expected property name");
        advance();
    }

    void computed_member() {
        advance();  // [
        const bool saved = std::exchange(no_in_, false);
        expression();
        no_in_ = saved;
        expect("]");
    }

    void new_expr() {
        advance();  // new
        if (tok_.is_punct(".")) {
            advance();
            member_name();
            return;
        }
        if (tok_.is_word("new")) {
            new_expr();
        } else {
            primary();
        }
        while (true) {
            if (tok_.is_punct(".")) {
                advance();
                member_name();
            } else if (tok_.is_punct("[")) {
                computed_member();
            } else {
                break;
            }
        }
        if (tok_.is_punct("(")) arguments();
    }

    Shape lhs_expr() {
        Shape s;
        bool async_word = false;
        if (tok_.is_word("new")) {
            new_expr();
            s = Shape::other;
        } else {
            async_word = tok_.is_word("async");
            s = primary();
        }
        int suffixes = 0;
        bool last_was_call = false;
        while (true) {
            if (tok_.is_punct(".")) {
                advance();
                member_name();
                last_was_call = false;
            } else if (tok_.is_punct("?.")) {
                advance();
                if (tok_.is_punct("(")) {
                    arguments();
                } else if (tok_.is_punct("[")) {
                    computed_member();
                } else {
                    member_name();
                }
                last_was_call = false;
            } else if (tok_.is_punct("[")) {
                computed_member();
                last_was_call = false;
            } else if (tok_.is_punct("(")) {
                arguments();
                last_was_call = true;
            } else if (tok_.kind == TokenKind::template_full || tok_.kind == TokenKind::template_head) {
                template_literal();
                last_was_call = false;
            } else {
                break;
            }
            ++suffixes;
        }
        if (suffixes == 0) return s;
        if (async_word && suffixes == 1 && last_was_call) return Shape::async_call;
        return Shape::other;
    }

    void template_literal() {
        if (tok_.kind == TokenKind::template_full) {
            advance();
            return;
        }
        advance();  // head
        const bool saved = std::exchange(no_in_, false);
        while (true) {
            expression();
            if (tok_.kind == TokenKind::template_middle) {
                advance();
                continue;
            }
            if (tok_.kind == TokenKind::template_tail) {
                advance();
                break;
            }
            fail("malformed template literal");
        }
        no_in_ = saved;
    }

    void check_identifier(const Token& t) const {
        const std::string_view w = t.text;
        if (w == "eval") fail_at("eval is outside the traceable subset", t.line);
        if (w == "Function") fail_at("the Function constructor is outside the traceable subset", t.line);
        if (kTimerApis.count(w) != 0) fail_at("timer APIs are outside the traceable subset", t.line);
        check_binding_name(t);
    }

    Shape primary() {
        const Token start = tok_;
        switch (tok_.kind) {
            case TokenKind::identifier: {
                const std::string_view w = tok_.text;
                if (w == "function") {
                    function_expr(start, false);
                    return Shape::other;
                }
                if (w == "async") {
                    const Token next = peek();
                    if (next.is_word("function") && !next.newline_before) {
                        advance();
                        function_expr(start, true);
                        return Shape::other;
                    }
                }
                if (w == "class") {
                    class_expr(start);
                    return Shape::other;
                }
                if (w == "import") fail("dynamic import is outside the traceable subset");
                if (w == "yield") fail("generators are outside the traceable subset");
                if (kStatementWords.count(w) != 0) fail("unexpected '" + std::string(w) + "'");
                if (w == "this" || w == "super" || w == "null" || w == "true" || w == "false") {
                    advance();
                    return Shape::other;
                }
                check_identifier(tok_);
                advance();
                return Shape::ident;
            }
            case TokenKind::private_name:
            case TokenKind::number:
            case TokenKind::string:
            case TokenKind::regex:
                advance();
                return Shape::other;
            case TokenKind::template_full:
            case TokenKind::template_head:
                template_literal();
                return Shape::other;
            case TokenKind::punct:
                break;
            default:
                fail("unexpected '" + std::string(tok_.text) + "'");
        }
        if (tok_.is_punct("/") || tok_.is_punct("/=")) {
            tok_ = lex_.rescan_regex(tok_);
            advance();
            return Shape::other;
        }
        if (tok_.is_punct("(")) {
            advance();
            const bool saved = std::exchange(no_in_, false);
            while (!tok_.is_punct(")")) {
                if (tok_.is_punct("...")) advance();
                assignment();
                if (!tok_.is_punct(",")) break;
                advance();
            }
            expect(")");
            no_in_ = saved;
            return Shape::paren;
        }
        if (tok_.is_punct("[")) {
            const bool saved = std::exchange(no_in_, false);
            advance();
            while (!tok_.is_punct("]")) {
                if (tok_.is_punct(",")) {
                    advance();
                    continue;
                }
                if (tok_.is_punct("...")) advance();
                assignment();
                if (!tok_.is_punct(",")) break;
                advance();
            }
            expect("]");
            no_in_ = saved;
            return Shape::other;
        }
        if (tok_.is_punct("{")) {
            object_literal(slot_matches(start) ? std::optional(slot_.path) : std::nullopt);
            return Shape::other;
        }
        fail("unexpected '" + std::string(tok_.text) + "'");
    }

    Lexer lex_;
    Token tok_;
    Token prev_;
    std::string module_;
    std::vector<std::string> path_;
    Slot slot_;
    std::vector<FnCtx> fns_;
    int depth_ = 0;
    bool no_in_ = false;
    std::set<std::string> names_;
    ParseResult out_;
};

}  // namespace

ParseResult parse(std::string_view source, std::string_view module_name) {
    return Parser(source, module_name).run();
}

}  // namespace callwitness::js
