#include "java_parser.hpp"

#include "java_lexer.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>

namespace callwitness::java {

namespace {

const std::unordered_set<std::string_view> kModifiers = {
    "public", "private", "protected", "static", "final", "abstract", "native",
    "transient", "volatile", "strictfp", "default", "sealed",
};

const std::unordered_set<std::string_view> kPrimitives = {
    "void", "boolean", "byte", "char", "short", "int", "long", "float", "double",
};

const std::unordered_set<std::string_view> kReflection = {
    "forName", "getDeclaredMethod", "getDeclaredMethods", "getMethod", "getMethods", "getDeclaredConstructor",
    "getDeclaredConstructors", "getConstructor", "getConstructors", "newInstance", "getDeclaredField", "setAccessible",
};

const std::unordered_set<std::string_view> kConcurrency = {
    "Thread", "ThreadGroup", "Executors", "ExecutorService", "CompletableFuture", "ForkJoinPool",
};

enum class TypeKind { class_, interface_, enum_ };

struct Modifiers {
    std::set<std::string, std::less<>> words;
    bool has(std::string_view w) const { return words.count(w) != 0; }
};

class Parser {
public:
    explicit Parser(std::string_view source) {
        Lexer lex(source);
        while (true) {
            tokens_.push_back(lex.next());
            if (tokens_.back().kind == TokenKind::eof) break;
        }
    }

    ParseResult run() {
        skip_annotations_only();
        if (tok().is_word("package")) {
            advance();
            out_.inventory.package_name = qualified_name();
            expect(";");
        }
        while (tok().is_word("import")) {
            const int line = tok().line;
            advance();
            if (tok().is_word("static")) advance();
            std::string name = qualified_name();
            if (tok().is_punct(".")) {
                advance();
                expect("*");
                name += ".*";
            }
            expect(";");
            if (name.rfind("java.util.concurrent", 0) == 0) fail_at("java.util.concurrent is outside the traceable subset", line);
            if (name.rfind("java.lang.reflect", 0) == 0) fail_at("reflection is outside the traceable subset", line);
            out_.inventory.imports.push_back(std::move(name));
        }
        while (tok().kind != TokenKind::eof) {
            if (tok().is_punct(";")) {
                advance();
                continue;
            }
            const Modifiers mods = modifiers();
            type_declaration({}, true, false, mods);
        }
        if (out_.inventory.main_class.empty()) {
            throw Error(ErrorCode::missing_entry_point, "no public static void main(String[]) method");
        }
        auto& inv = out_.inventory;
        std::string binary = main_path_.front();
        for (size_t i = 1; i < main_path_.size(); ++i) binary += "$" + main_path_[i];
        inv.main_binary_name = inv.package_name.empty() ? binary : inv.package_name + "." + binary;
        return std::move(out_);
    }

private:
    const Token& tok() const { return tokens_[i_]; }
    const Token& at(size_t k) const { return tokens_[std::min(k, tokens_.size() - 1)]; }
    const Token& peek(size_t ahead = 1) const { return at(i_ + ahead); }
    void advance() {
        if (i_ + 1 < tokens_.size()) ++i_;
    }

    [[noreturn]] void fail(const std::string& why) const { fail_at(why, tok().line); }
    [[noreturn]] void fail_at(const std::string& why, int line) const {
        throw Error(ErrorCode::unsupported_construct, why, line);
    }

    void expect(std::string_view p) {
        if (!tok().is_punct(p)) fail("expected '" + std::string(p) + "' but found '" + std::string(tok().text) + "'");
        advance();
    }

    std::string identifier() {
        if (tok().kind != TokenKind::identifier) fail("expected identifier");
        check_word(tok());
        std::string s(tok().text);
        advance();
        return s;
    }

    std::string qualified_name() {
        std::string s = identifier();
        while (tok().is_punct(".") && peek().kind == TokenKind::identifier) {
            advance();
            s += "." + identifier();
        }
        return s;
    }

    void check_word(const Token& t) const {
        const std::string_view w = t.text;
        if (w == kJavaTracerClass) fail_at("the name CallwitnessTracer is reserved", t.line);
        if (w.substr(0, 4) == "__cw") fail_at("identifiers starting with __cw are reserved", t.line);
        if (w == "synchronized") fail_at("synchronized is outside the traceable subset", t.line);
        if (kConcurrency.count(w) != 0) fail_at("threads are outside the traceable subset", t.line);
        if (kReflection.count(w) != 0 || w == "reflect") fail_at("reflection is outside the traceable subset", t.line);
    }

    // Skips to the token matching the opener at the cursor, checking every
    // token on the way; leaves the cursor on the closer.
    void skip_balanced(std::string_view open, std::string_view close) {
        int depth = 0;
        while (true) {
            const Token& t = tok();
            if (t.kind == TokenKind::eof) fail("unbalanced '" + std::string(open) + "'");
            if (t.is_punct(open)) {
                ++depth;
            } else if (t.is_punct(close)) {
                if (--depth == 0) return;
            } else {
                check_body_token();
            }
            advance();
        }
    }

    void check_body_token() {
        const Token& t = tok();
        if (t.kind == TokenKind::identifier) {
            check_word(t);
            const bool after_dot = i_ > 0 && tokens_[i_ - 1].is_punct(".");
            if ((t.text == "class" && !after_dot) || t.text == "interface" || t.text == "enum") {
                fail("local and anonymous classes are outside the traceable subset");
            }
            if (t.text == "new") check_instance_creation();
        } else if (t.is_punct("->")) {
            fail("lambdas and switch arrows are outside the traceable subset");
        } else if (t.is_punct("::")) {
            fail("method references are outside the traceable subset");
        }
    }

    // `new Type(args) {` declares an anonymous class.
    void check_instance_creation() const {
        size_t k = i_ + 1;
        while (at(k).kind == TokenKind::identifier || at(k).is_punct(".")) ++k;
        if (at(k).is_punct("<")) {
            int depth = 0;
            for (; at(k).kind != TokenKind::eof; ++k) {
                depth += type_arg_delta(at(k));
                if (depth <= 0) break;
            }
            ++k;
        }
        if (!at(k).is_punct("(")) return;
        int depth = 0;
        for (; at(k).kind != TokenKind::eof; ++k) {
            if (at(k).is_punct("(")) ++depth;
            if (at(k).is_punct(")") && --depth == 0) break;
        }
        if (at(k + 1).is_punct("{")) fail("anonymous classes are outside the traceable subset");
    }

    static int type_arg_delta(const Token& t) {
        if (t.is_punct("<")) return 1;
        if (t.is_punct(">")) return -1;
        if (t.is_punct(">>")) return -2;
        if (t.is_punct(">>>")) return -3;
        return 0;
    }

    void skip_type_arguments() {
        int depth = 0;
        while (true) {
            if (tok().kind == TokenKind::eof) fail("unbalanced type arguments");
            if (tok().is_punct("?") || tok().kind == TokenKind::identifier) check_word(tok());
            depth += type_arg_delta(tok());
            advance();
            if (depth <= 0) return;
        }
    }

    void skip_annotation() {
        advance();  // @
        if (tok().is_word("interface")) fail("annotation type declarations are outside the traceable subset");
        qualified_name();
        if (tok().is_punct("(")) {
            skip_balanced("(", ")");
            advance();
        }
    }

    void skip_annotations_only() {
        while (tok().is_punct("@") && !peek().is_word("interface")) skip_annotation();
    }

    Modifiers modifiers() {
        Modifiers m;
        while (true) {
            if (tok().is_punct("@")) {
                skip_annotation();
            } else if (tok().is_word("synchronized")) {
                fail("synchronized is outside the traceable subset");
            } else if (tok().kind == TokenKind::identifier && kModifiers.count(tok().text) != 0) {
                m.words.emplace(tok().text);
                advance();
            } else if (tok().is_word("non") && peek().is_punct("-") && peek(2).is_word("sealed")) {
                advance();
                advance();
                advance();
            } else {
                return m;
            }
        }
    }

    // Erased type as written: last name segment plus array dims.
    std::string type() {
        skip_annotations_only();
        if (tok().kind != TokenKind::identifier) fail("expected a type");
        std::string name = identifier();
        if (tok().is_punct("<")) skip_type_arguments();
        while (tok().is_punct(".") && peek().kind == TokenKind::identifier) {
            advance();
            name = identifier();
            if (tok().is_punct("<")) skip_type_arguments();
        }
        while (tok().is_punct("[") && peek().is_punct("]")) {
            advance();
            advance();
            name += "[]";
        }
        return name;
    }

    void type_declaration(std::vector<std::string> outer, bool top_level, bool in_interface, const Modifiers& mods) {
        const Token& kw = tok();
        TypeKind kind;
        if (kw.is_word("class")) {
            kind = TypeKind::class_;
        } else if (kw.is_word("interface")) {
            kind = TypeKind::interface_;
        } else if (kw.is_word("enum")) {
            kind = TypeKind::enum_;
        } else if (kw.is_word("record")) {
            fail("records are outside the traceable subset");
        } else {
            fail("expected a class, interface or enum declaration");
        }
        advance();
        const std::string name = identifier();
        if (!top_level && kind == TypeKind::class_ && !mods.has("static") && !in_interface) {
            fail_at("non-static inner classes are outside the traceable subset", kw.line);
        }
        if (top_level && mods.has("public")) out_.inventory.public_class = name;
        if (tok().is_punct("<")) fail("generic type declarations are outside the traceable subset");
        while (!tok().is_punct("{")) {
            if (tok().kind == TokenKind::eof) fail("expected class body");
            if (tok().kind == TokenKind::identifier) check_word(tok());
            advance();
        }
        outer.push_back(name);
        class_body(outer, kind);
    }

    void enum_constants() {
        while (tok().kind == TokenKind::identifier) {
            skip_annotations_only();
            identifier();
            if (tok().is_punct("(")) {
                skip_balanced("(", ")");
                advance();
            }
            if (tok().is_punct("{")) fail("enum constants with bodies are outside the traceable subset");
            if (!tok().is_punct(",")) break;
            advance();
        }
        if (tok().is_punct(";")) advance();
    }

    void class_body(const std::vector<std::string>& path, TypeKind kind) {
        expect("{");
        if (kind == TypeKind::enum_) enum_constants();
        while (!tok().is_punct("}")) {
            if (tok().kind == TokenKind::eof) fail("unterminated class body");
            if (tok().is_punct(";")) {
                advance();
                continue;
            }
            const Token start = tok();
            const Modifiers mods = modifiers();
            if (tok().is_punct("{")) {  // initializer block
                skip_balanced("{", "}");
                advance();
                continue;
            }
            if (tok().is_word("class") || tok().is_word("interface") || tok().is_word("enum") ||
                tok().is_word("record")) {
                type_declaration(path, false, kind == TypeKind::interface_, mods);
                continue;
            }
            if (tok().is_punct("<")) fail("generic methods are outside the traceable subset");
            if (tok().kind == TokenKind::identifier && tok().text == path.back() && peek().is_punct("(")) {
                advance();
                method(path, std::string(kConstructorMember), start, mods, "", kind);
                continue;
            }
            const std::string ret = type();
            const std::string name = identifier();
            if (tok().is_punct("(")) {
                method(path, name, start, mods, ret, kind);
                continue;
            }
            // field declarators up to ';'
            while (!tok().is_punct(";")) {
                if (tok().kind == TokenKind::eof) fail("unterminated field declaration");
                if (tok().is_punct("{")) {
                    skip_balanced("{", "}");
                } else if (tok().is_punct("(")) {
                    skip_balanced("(", ")");
                } else {
                    check_body_token();
                }
                advance();
            }
            advance();
        }
        advance();
    }

    void method(const std::vector<std::string>& path, const std::string& name, const Token& start, const Modifiers& mods,
                const std::string& ret, TypeKind owner_kind) {
        expect("(");
        std::string sig;
        std::vector<std::string> params;
        while (!tok().is_punct(")")) {
            modifiers();
            std::string t = type();
            if (tok().is_punct("...")) {
                advance();
                t += "[]";
            }
            identifier();
            while (tok().is_punct("[") && peek().is_punct("]")) {
                advance();
                advance();
                t += "[]";
            }
            params.push_back(t);
            if (!tok().is_punct(",")) break;
            advance();
        }
        expect(")");
        while (tok().is_punct("[") && peek().is_punct("]")) {
            advance();
            advance();
        }
        if (tok().is_word("throws")) {
            advance();
            type();
            while (tok().is_punct(",")) {
                advance();
                type();
            }
        }
        for (size_t k = 0; k < params.size(); ++k) sig += (k ? "," : "") + params[k];

        if (name == "main" && mods.has("static") && ret == "void" && params.size() == 1 && params[0] == "String[]" &&
            (mods.has("public") || owner_kind == TypeKind::interface_)) {
            if (out_.inventory.main_class.empty() || (path.size() == 1 && main_path_.size() > 1)) {
                main_path_ = path;
                std::string cls = path.front();
                for (size_t k = 1; k < path.size(); ++k) cls += "." + path[k];
                out_.inventory.main_class = cls;
            }
        }

        if (tok().is_punct(";")) {  // abstract, interface or native: nothing to instrument
            advance();
            return;
        }
        if (!tok().is_punct("{")) fail("expected method body");
        BodyRange range;
        range.open = tok().end;
        const size_t body_start = i_;
        const bool is_ctor = name == kConstructorMember;
        if (is_ctor && (peek().is_word("this") || peek().is_word("super")) && peek(2).is_punct("(")) {
            advance();
            advance();
            skip_balanced("(", ")");
            advance();
            if (!tok().is_punct(";")) fail("expected ';' after explicit constructor call");
            range.open = tok().end;
            i_ = body_start;
        }
        skip_balanced("{", "}");
        range.close = tok().begin;
        const int end_line = tok().line;
        advance();

        auto segments = path;
        segments.push_back(name);
        FunctionKind kind = is_ctor ? FunctionKind::constructor
                                    : (mods.has("static") ? FunctionKind::static_method : FunctionKind::instance_method);
        std::string owner = path.front();
        for (size_t k = 1; k < path.size(); ++k) owner += "." + path[k];
        QualifiedName qn(Language::java, std::move(segments), sig);
        if (!names_.insert(qn.text()).second) fail_at("duplicate method " + qn.text(), start.line);
        out_.inventory.methods.functions.push_back(FunctionEntry{std::move(qn), kind, {start.line, end_line}, owner});
        out_.bodies.push_back(range);
    }

    std::vector<Token> tokens_;
    size_t i_ = 0;
    std::vector<std::string> main_path_;
    std::set<std::string> names_;
    ParseResult out_;
};

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).run(); }

}  // namespace callwitness::java
