#include "parser_base.hpp"
#include "parsers.hpp"

#include <array>
#include <optional>

namespace j2k::detail {
namespace {

constexpr auto kHardKeywords = std::to_array<std::string_view>({
    "as", "break", "class", "continue", "do", "else", "false", "for", "fun", "if", "in",
    "interface", "is", "null", "object", "package", "return", "super", "this", "throw", "true",
    "try", "typealias", "typeof", "val", "var", "when", "while",
});

constexpr auto kModifierWords = std::to_array<std::string_view>({
    "public", "private", "protected", "internal", "abstract", "final", "open", "override",
    "sealed", "data", "enum", "inner", "annotation", "companion", "inline", "noinline",
    "crossinline", "reified", "suspend", "tailrec", "operator", "infix", "external", "const",
    "lateinit", "vararg", "expect", "actual", "value",
});

constexpr auto kAssignOps = std::to_array<std::string_view>({"=", "+=", "-=", "*=", "/=", "%="});

// Identifiers that never act as infix function names.
constexpr auto kNotInfix = std::to_array<std::string_view>({
    "else", "in", "is", "as", "by", "where", "catch", "finally", "get", "set", "while",
});

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
    for (auto v : set) {
        if (v == s) return true;
    }
    return false;
}

enum class DeclContext { TopLevel, Member, Local };

class KotlinParser : public ParserBase {
public:
    explicit KotlinParser(std::string_view source) : ParserBase(source, Language::Kotlin) {}

    AstNode parse_file() {
        AstNode root = make("source_file", 0);
        while (!at_end()) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                if (at("@") && at("file", 1) && at(":", 2)) {
                    root.children.push_back(parse_annotation());
                } else if (at("package")) {
                    root.children.push_back(parse_header("package_header"));
                } else if (at("import")) {
                    root.children.push_back(parse_header("import_header"));
                } else {
                    root.children.push_back(parse_declaration_or_statement(DeclContext::TopLevel));
                }
            } catch (const ParseError&) {
                root.children.push_back(recover(start, true));
            }
            if (pos_ == start) root.children.push_back(recover(start, true));
        }
        root.span.end = source_.size();
        return root;
    }

private:
    // ---- newline handling ----------------------------------------------

    // Inside () and [] line breaks are insignificant; inside {} they separate statements.
    class NewlineScope {
    public:
        NewlineScope(KotlinParser& p, bool ignore) : p_(p) { p_.ignore_newlines_.push_back(ignore); }
        ~NewlineScope() { p_.ignore_newlines_.pop_back(); }
        NewlineScope(const NewlineScope&) = delete;
        NewlineScope& operator=(const NewlineScope&) = delete;

    private:
        KotlinParser& p_;
    };

    // `class A : I by impl { ... }`: the body is not a trailing lambda of `impl`.
    class LambdaScope {
    public:
        LambdaScope(KotlinParser& p, bool allow) : p_(p), saved_(p.no_trailing_lambda_) {
            p_.no_trailing_lambda_ = !allow;
        }
        ~LambdaScope() { p_.no_trailing_lambda_ = saved_; }
        LambdaScope(const LambdaScope&) = delete;
        LambdaScope& operator=(const LambdaScope&) = delete;

    private:
        KotlinParser& p_;
        bool saved_;
    };

    bool newline_here(std::size_t n = 0) const {
        const bool ignored = !ignore_newlines_.empty() && ignore_newlines_.back();
        return peek(n).newline_before && !ignored;
    }

    bool at_word(std::size_t n = 0) const {
        return at_identifier(n) && !contains(kHardKeywords, peek(n).text);
    }

    std::string expect_word() {
        if (!at_word()) fail();
        return std::string(advance().text);
    }

    bool at_modifier() const {
        if (!at_identifier() || !contains(kModifierWords, peek().text)) return false;
        return at_identifier(1) || at("@", 1);
    }

    AstNode parse_header(std::string type) {
        AstNode n = make(std::move(type), here());
        advance();
        std::string name = expect_word();
        while (at(".")) {
            advance();
            name += '.';
            if (accept("*")) {
                name += '*';
                break;
            }
            name += expect_word();
        }
        if (at("as") && !newline_here()) {
            advance();
            name += " as ";
            name += expect_word();
        }
        n.value = name;
        accept(";");
        return finished(std::move(n));
    }

    // ---- modifiers and annotations -------------------------------------

    std::optional<AstNode> parse_modifiers() {
        AstNode n = make("modifiers", here());
        std::string words;
        bool any = false;
        while (true) {
            if (at("@")) {
                n.children.push_back(parse_annotation());
                any = true;
            } else if (at_modifier()) {
                if (!words.empty()) words += ' ';
                words += advance().text;
                any = true;
            } else {
                break;
            }
        }
        if (!any) return std::nullopt;
        if (!words.empty()) n.value = words;
        return finished(std::move(n));
    }

    AstNode parse_annotation() {
        AstNode n = make("annotation", here());
        expect("@");
        if (at("[")) {
            skip_balanced();
            n.value = "[]";
            return finished(std::move(n));
        }
        std::string name;
        // Use-site target: @get:Foo, @file:JvmName
        if (at_identifier() && at(":", 1) && adjacent(0)) {
            name = std::string(advance().text) + ":";
            advance();
        }
        if (!at_identifier()) fail();
        name += advance().text;
        while (at(".") && at_identifier(1)) {
            advance();
            name += '.';
            name += advance().text;
        }
        if (at("<") && peek().begin == prev_end()) skip_type_arguments();
        n.value = name;
        if (at("(") && !peek().newline_before) n.children.push_back(parse_value_arguments());
        return finished(std::move(n));
    }

    // ---- types ----------------------------------------------------------

    void skip_type_arguments() {
        NewlineScope scope(*this, true);
        expect("<");
        while (!at(">")) {
            if (!accept("*")) {
                if ((at("in") || at("out")) && at_identifier(1)) advance();
                type_tokens();
            }
            if (!accept(",")) break;
        }
        expect(">");
    }

    void user_type_tokens() {
        if (!at_identifier() || (contains(kHardKeywords, peek().text) && !at("in") && !at("out"))) fail();
        advance();
        if (at("<")) skip_type_arguments();
        while (at(".") && at_identifier(1) && !at("(", 1)) {
            advance();
            advance();
            if (at("<")) skip_type_arguments();
        }
    }

    void function_type_params() {
        NewlineScope scope(*this, true);
        expect("(");
        while (!at(")")) {
            if (at_identifier() && at(":", 1)) {
                advance();
                advance();
            }
            type_tokens();
            if (!accept(",")) break;
        }
        expect(")");
    }

    // Consumes one type; throws if none is present.
    void type_tokens() {
        while (at("@")) parse_annotation();
        if (at("suspend") && (at("(", 1) || at_identifier(1))) advance();
        if (at("(")) {
            function_type_params();
            if (accept("->")) {
                type_tokens();
                return;
            }
        } else {
            user_type_tokens();
            if (at(".") && at("(", 1)) {
                // Receiver function type: A.() -> B
                advance();
                function_type_params();
                expect("->");
                type_tokens();
                return;
            }
        }
        while (at("?") && !newline_here()) advance();
        if (at("&") && at_identifier(1)) {
            advance();
            type_tokens();
        }
    }

    AstNode parse_type() {
        const auto from = pos_;
        AstNode n = make("type", here());
        type_tokens();
        n.value = joined_text(from);
        return finished(std::move(n));
    }

    AstNode parse_type_parameters() {
        const auto from = pos_;
        AstNode n = make("type_parameters", here());
        NewlineScope scope(*this, true);
        expect("<");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail();
            if (at("<")) ++depth;
            if (at(">")) --depth;
            advance();
        }
        n.value = joined_text(from);
        return finished(std::move(n));
    }

    std::optional<AstNode> parse_type_constraints() {
        if (!at("where")) return std::nullopt;
        const auto from = pos_;
        AstNode n = make("type_constraints", here());
        advance();
        do {
            while (at("@")) parse_annotation();
            expect_word();
            expect(":");
            type_tokens();
        } while (accept(","));
        n.value = joined_text(from);
        return finished(std::move(n));
    }

    // ---- declarations ---------------------------------------------------

    bool at_declaration_keyword() const {
        if (!at_identifier()) return false;
        const auto w = peek().text;
        if (w == "class" || w == "interface" || w == "fun" || w == "val" || w == "var" ||
            w == "typealias") {
            return true;
        }
        if (w == "object") return at_word(1);
        return false;
    }

    AstNode parse_declaration_or_statement(DeclContext ctx) {
        const auto start = pos_;
        const auto begin = here();
        auto mods = parse_modifiers();
        if (auto decl = parse_declaration(begin, mods, ctx)) return std::move(*decl);
        if (mods) {
            // Annotated expression statement.
            pos_ = start;
            while (at("@")) parse_annotation();
        }
        return parse_statement_body();
    }

    std::optional<AstNode> parse_declaration(std::uint32_t begin, std::optional<AstNode>& mods, DeclContext ctx) {
        auto with_mods = [&](AstNode n) {
            if (mods) n.children.insert(n.children.begin(), std::move(*mods));
            return n;
        };
        if (at("class") || at("interface") || (at("fun") && at("interface", 1))) {
            const bool is_enum = mods && mods->value && has_word(*mods->value, "enum");
            return finished(with_mods(parse_class(begin, is_enum)));
        }
        if (at("object") && (at_word(1) || ctx != DeclContext::Local)) {
            const bool companion = mods && mods->value && has_word(*mods->value, "companion");
            return finished(with_mods(parse_object(begin, companion)));
        }
        if (at("fun")) return finished(with_mods(parse_function(begin)));
        if (at("val") || at("var")) return finished(with_mods(parse_property(begin, ctx)));
        if (at("typealias")) {
            AstNode n = make("type_alias", begin);
            advance();
            n.value = expect_word();
            if (at("<")) n.children.push_back(parse_type_parameters());
            expect("=");
            n.children.push_back(parse_type());
            return finished(with_mods(std::move(n)));
        }
        if (ctx == DeclContext::Member) {
            if (at("constructor")) {
                AstNode n = make("secondary_constructor", begin);
                advance();
                parse_function_parameters(n.children);
                if (at(":") ) {
                    AstNode deleg = make("constructor_delegation_call", here());
                    advance();
                    if (!at("this") && !at("super")) fail();
                    deleg.value = std::string(advance().text);
                    deleg.children.push_back(parse_value_arguments());
                    n.children.push_back(finished(std::move(deleg)));
                }
                if (at("{")) n.children.push_back(parse_block());
                return finished(with_mods(std::move(n)));
            }
            if (at("init") && at("{", 1)) {
                AstNode n = make("anonymous_initializer", begin);
                advance();
                n.children.push_back(parse_block());
                return finished(with_mods(std::move(n)));
            }
        }
        return std::nullopt;
    }

    static bool has_word(std::string_view words, std::string_view word) {
        std::size_t start = 0;
        while (start <= words.size()) {
            auto end = words.find(' ', start);
            if (end == std::string_view::npos) end = words.size();
            if (words.substr(start, end - start) == word) return true;
            start = end + 1;
        }
        return false;
    }

    AstNode parse_class(std::uint32_t begin, bool is_enum) {
        AstNode n = make("class_declaration", begin);
        if (accept("fun")) {
            expect("interface");
        } else {
            advance();  // class / interface
        }
        n.value = expect_word();
        if (at("<")) n.children.push_back(parse_type_parameters());
        {
            // Primary constructor, possibly annotated: class A @Inject constructor(...)
            const auto ctor_begin = here();
            const auto save = pos_;
            auto ctor_mods = parse_modifiers();
            if (at("constructor") || (at("(") && !newline_here())) {
                AstNode ctor = make("primary_constructor", ctor_begin);
                if (ctor_mods) ctor.children.push_back(std::move(*ctor_mods));
                accept("constructor");
                parse_class_parameters(ctor.children);
                n.children.push_back(finished(std::move(ctor)));
            } else {
                pos_ = save;
            }
        }
        if (at(":")) {
            advance();
            n.children.push_back(parse_delegation_specifiers());
        }
        if (auto c = parse_type_constraints()) n.children.push_back(std::move(*c));
        if (at("{")) n.children.push_back(parse_class_body(is_enum));
        return n;
    }

    AstNode parse_object(std::uint32_t begin, bool companion) {
        AstNode n = make(companion ? "companion_object" : "object_declaration", begin);
        expect("object");
        if (at_word() && !at(":") ) n.value = expect_word();
        else if (companion) n.value = "Companion";
        if (at(":")) {
            advance();
            n.children.push_back(parse_delegation_specifiers());
        }
        if (at("{")) n.children.push_back(parse_class_body(false));
        return n;
    }

    AstNode parse_delegation_specifiers() {
        AstNode list = make("delegation_specifiers", here());
        do {
            const auto begin = here();
            while (at("@")) parse_annotation();
            const auto from = pos_;
            type_tokens();
            const std::string type_text = joined_text(from);
            if (at("(") && !newline_here()) {
                AstNode call = make("constructor_invocation", begin);
                call.value = type_text;
                call.children.push_back(parse_value_arguments());
                list.children.push_back(finished(std::move(call)));
            } else if (at("by")) {
                AstNode d = make("explicit_delegation", begin);
                d.value = type_text;
                advance();
                LambdaScope scope(*this, false);
                d.children.push_back(parse_expression());
                list.children.push_back(finished(std::move(d)));
            } else {
                AstNode t = make("type", begin);
                t.value = type_text;
                list.children.push_back(finished(std::move(t)));
            }
        } while (accept(","));
        return finished(std::move(list));
    }

    void parse_class_parameters(std::vector<AstNode>& out) {
        NewlineScope scope(*this, true);
        expect("(");
        while (!at(")")) {
            const auto begin = here();
            auto mods = parse_modifiers();
            AstNode p = make("class_parameter", begin);
            if (at("val") || at("var")) {
                const std::string binding(advance().text);
                if (!mods) {
                    mods = make("modifiers", begin);
                    mods->value = binding;
                } else {
                    mods->value = mods->value ? *mods->value + " " + binding : binding;
                }
                finish(*mods);
            }
            if (mods) p.children.push_back(std::move(*mods));
            p.value = expect_word();
            expect(":");
            p.children.push_back(parse_type());
            if (accept("=")) p.children.push_back(parse_expression());
            out.push_back(finished(std::move(p)));
            if (!accept(",")) break;
        }
        expect(")");
    }

    AstNode parse_class_body(bool is_enum) {
        AstNode body = make(is_enum ? "enum_class_body" : "class_body", here());
        NewlineScope scope(*this, false);
        expect("{");
        if (is_enum) parse_enum_entries(body.children);
        while (!at("}") && !at_end()) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                const auto begin = here();
                auto mods = parse_modifiers();
                auto decl = parse_declaration(begin, mods, DeclContext::Member);
                if (!decl) fail();
                body.children.push_back(std::move(*decl));
            } catch (const ParseError&) {
                body.children.push_back(recover(start, true));
            }
            if (pos_ == start) body.children.push_back(recover(start, true));
        }
        accept("}");
        return finished(std::move(body));
    }

    void parse_enum_entries(std::vector<AstNode>& out) {
        while (!at(";") && !at("}") && !at_end()) {
            const auto start = pos_;
            try {
                const auto begin = here();
                auto mods = parse_modifiers();
                AstNode e = make("enum_entry", begin);
                if (mods) e.children.push_back(std::move(*mods));
                e.value = expect_word();
                if (at("(")) e.children.push_back(parse_value_arguments());
                if (at("{")) e.children.push_back(parse_class_body(false));
                out.push_back(finished(std::move(e)));
                if (!accept(",")) break;
            } catch (const ParseError&) {
                out.push_back(recover(start, true));
            }
        }
        accept(";");
    }

    // Parses `[Receiver.]name` and returns (receiver text, name).
    std::pair<std::optional<AstNode>, std::string> parse_receiver_and_name() {
        if (at("(")) {
            AstNode receiver = parse_type();
            expect(".");
            return {std::move(receiver), expect_word()};
        }
        const auto from = pos_;
        const auto begin = here();
        std::size_t last_dot = 0;
        std::uint32_t receiver_end = 0;
        std::string name = expect_word();
        if (at("<")) skip_type_arguments();
        while (at("?") ) advance();
        while (at(".") && at_identifier(1)) {
            receiver_end = prev_end();
            last_dot = pos_;
            advance();
            name = std::string(advance().text);
            if (at("<")) skip_type_arguments();
            while (at("?")) advance();
        }
        if (last_dot == 0) return {std::nullopt, name};
        const auto saved = pos_;
        pos_ = last_dot;
        AstNode receiver = make("receiver_type", begin);
        receiver.value = joined_text(from);
        receiver.span.end = receiver_end;
        pos_ = saved;
        return {std::move(receiver), name};
    }

    AstNode parse_function(std::uint32_t begin) {
        AstNode n = make("function_declaration", begin);
        expect("fun");
        if (at("<")) n.children.push_back(parse_type_parameters());
        auto [receiver, name] = parse_receiver_and_name();
        if (receiver) n.children.push_back(std::move(*receiver));
        n.value = name;
        parse_function_parameters(n.children);
        if (at(":")) {
            advance();
            n.children.push_back(parse_type());
        }
        if (auto c = parse_type_constraints()) n.children.push_back(std::move(*c));
        parse_function_body(n.children);
        return n;
    }

    void parse_function_body(std::vector<AstNode>& out) {
        if (at("{")) {
            out.push_back(parse_block());
        } else if (at("=")) {
            advance();
            out.push_back(parse_expression());
        }
    }

    void parse_function_parameters(std::vector<AstNode>& out) {
        NewlineScope scope(*this, true);
        expect("(");
        while (!at(")")) {
            const auto begin = here();
            auto mods = parse_modifiers();
            AstNode p = make("function_value_parameter", begin);
            if (mods) p.children.push_back(std::move(*mods));
            p.value = expect_word();
            if (accept(":")) p.children.push_back(parse_type());
            if (accept("=")) p.children.push_back(parse_expression());
            out.push_back(finished(std::move(p)));
            if (!accept(",")) break;
        }
        expect(")");
    }

    AstNode parse_property(std::uint32_t begin, DeclContext ctx) {
        AstNode n = make(ctx == DeclContext::Local ? "variable_declaration" : "property_declaration", begin);
        advance();  // val / var
        if (at("<")) n.children.push_back(parse_type_parameters());
        if (at("(")) {
            NewlineScope scope(*this, true);
            advance();
            std::string names;
            while (!at(")")) {
                if (!names.empty()) names += ", ";
                names += expect_word();
                if (accept(":")) type_tokens();
                if (!accept(",")) break;
            }
            expect(")");
            n.value = names;
        } else {
            auto [receiver, name] = parse_receiver_and_name();
            if (receiver) n.children.push_back(std::move(*receiver));
            n.value = name;
        }
        if (at(":")) {
            advance();
            n.children.push_back(parse_type());
        }
        if (auto c = parse_type_constraints()) n.children.push_back(std::move(*c));
        if (at("=")) {
            advance();
            n.children.push_back(parse_expression());
        } else if (at("by")) {
            AstNode d = make("property_delegate", here());
            advance();
            d.children.push_back(parse_expression());
            n.children.push_back(finished(std::move(d)));
        }
        if (ctx != DeclContext::Local) {
            for (int i = 0; i < 2 && at_accessor(); ++i) n.children.push_back(parse_accessor());
        }
        return n;
    }

    bool at_accessor() const {
        std::size_t i = 0;
        while (at_identifier(i) && contains(kModifierWords, peek(i).text)) ++i;
        if (!at("get", i) && !at("set", i)) return false;
        const auto& next = peek(i + 1);
        return at("(", i + 1) || at("=", i + 1) || next.newline_before || at("}", i + 1) ||
               at(";", i + 1) || next.kind == TokenKind::End;
    }

    AstNode parse_accessor() {
        const auto begin = here();
        auto mods = parse_modifiers();
        while (at_identifier() && contains(kModifierWords, peek().text)) advance();
        AstNode n = make(at("get") ? "getter" : "setter", begin);
        advance();
        if (mods) n.children.push_back(std::move(*mods));
        if (at("(")) {
            NewlineScope scope(*this, true);
            advance();
            if (!at(")")) {
                AstNode p = make("function_value_parameter", here());
                p.value = expect_word();
                if (accept(":")) p.children.push_back(parse_type());
                n.children.push_back(finished(std::move(p)));
            }
            expect(")");
            if (at(":")) {
                advance();
                n.children.push_back(parse_type());
            }
            parse_function_body(n.children);
        }
        return finished(std::move(n));
    }

    // ---- statements -----------------------------------------------------

    AstNode parse_block() {
        AstNode block = make("block", here());
        NewlineScope scope(*this, false);
        expect("{");
        parse_statements(block.children);
        accept("}");
        return finished(std::move(block));
    }

    void parse_statements(std::vector<AstNode>& out) {
        while (!at_end() && !at("}")) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                out.push_back(parse_statement());
            } catch (const ParseError&) {
                out.push_back(recover(start, true));
            }
            if (pos_ == start) out.push_back(recover(start, true));
        }
    }

    void skip_label_definition() {
        // loop@ for (...)
        if (at_word() && at("@", 1) && adjacent(0) && !adjacent(1)) {
            advance();
            advance();
        }
    }

    AstNode parse_statement() {
        skip_label_definition();
        const auto start = pos_;
        const auto begin = here();
        auto mods = parse_modifiers();
        if (auto decl = parse_declaration(begin, mods, DeclContext::Local)) return finished(std::move(*decl));
        if (mods) {
            pos_ = start;
            while (at("@")) parse_annotation();
        }
        return parse_statement_body();
    }

    AstNode parse_statement_body() {
        skip_label_definition();
        if (at("for")) return parse_for();
        if (at("while")) return parse_while();
        if (at("do") && (at("{", 1) || !at("(", 1))) return parse_do_while();

        AstNode expr = parse_expression();
        if (peek().kind == TokenKind::Operator && contains(kAssignOps, peek().text) && !newline_here()) {
            AstNode n = make("assignment", expr.span.begin);
            n.value = std::string(advance().text);
            n.children.push_back(std::move(expr));
            n.children.push_back(parse_expression());
            return finished(std::move(n));
        }
        return expr;
    }

    AstNode parse_control_body() {
        if (at("{")) return parse_block();
        if (at(";")) {
            AstNode empty = make("block", here());
            return empty;
        }
        return parse_statement();
    }

    AstNode parse_for() {
        AstNode n = make("for_statement", here());
        expect("for");
        {
            NewlineScope scope(*this, true);
            expect("(");
            while (at("@")) parse_annotation();
            if (at("(")) {
                advance();
                std::string names;
                while (!at(")")) {
                    if (!names.empty()) names += ", ";
                    names += expect_word();
                    if (accept(":")) type_tokens();
                    if (!accept(",")) break;
                }
                expect(")");
                n.value = names;
            } else {
                n.value = expect_word();
            }
            if (accept(":")) n.children.push_back(parse_type());
            expect("in");
            n.children.push_back(parse_expression());
            expect(")");
        }
        n.children.push_back(parse_control_body());
        return finished(std::move(n));
    }

    AstNode parse_paren_expression() {
        NewlineScope scope(*this, true);
        expect("(");
        AstNode e = parse_expression();
        expect(")");
        return e;
    }

    AstNode parse_while() {
        AstNode n = make("while_statement", here());
        expect("while");
        n.children.push_back(parse_paren_expression());
        n.children.push_back(parse_control_body());
        return finished(std::move(n));
    }

    AstNode parse_do_while() {
        AstNode n = make("do_while_statement", here());
        expect("do");
        n.children.push_back(parse_control_body());
        expect("while");
        n.children.push_back(parse_paren_expression());
        return finished(std::move(n));
    }

    // ---- expressions ----------------------------------------------------

    struct BinaryOp {
        std::string text;
        std::string type;
        int precedence = 0;
        int tokens = 1;
    };

    std::optional<BinaryOp> binary_op() const {
        const Token& t = peek();
        if (t.kind == TokenKind::End) return std::nullopt;
        const bool nl = newline_here();
        if (t.kind == TokenKind::Identifier) {
            if (nl) return std::nullopt;
            if (t.text == "in") return BinaryOp{"in", "binary_expression", 5, 1};
            if (t.text == "is") return BinaryOp{"is", "type_test", 5, 1};
            if (t.text == "as") {
                if (at("?", 1) && adjacent(0)) return BinaryOp{"as?", "as_expression", 11, 2};
                return BinaryOp{"as", "as_expression", 11, 1};
            }
            if (at_word() && !contains(kNotInfix, t.text)) {
                return BinaryOp{std::string(t.text), "infix_expression", 7, 1};
            }
            return std::nullopt;
        }
        if (t.kind != TokenKind::Operator) return std::nullopt;
        const auto op = t.text;
        if (nl && op != "&&" && op != "||" && op != "?:") return std::nullopt;
        if (op == "!" && adjacent(0) && (at("in", 1) || at("is", 1))) {
            if (at("in", 1)) return BinaryOp{"!in", "binary_expression", 5, 2};
            return BinaryOp{"!is", "type_test", 5, 2};
        }
        if (op == ">") {
            if (adjacent(0) && at("=", 1)) return BinaryOp{">=", "binary_expression", 4, 2};
            return BinaryOp{">", "binary_expression", 4, 1};
        }
        static constexpr std::array<std::pair<std::string_view, int>, 16> kTable{{
            {"||", 1}, {"&&", 2}, {"==", 3}, {"!=", 3}, {"===", 3}, {"!==", 3}, {"<", 4}, {"<=", 4},
            {"?:", 6}, {"..", 8}, {"..<", 8}, {"+", 9}, {"-", 9}, {"*", 10}, {"/", 10}, {"%", 10},
        }};
        for (const auto& [text, prec] : kTable) {
            if (op == text) return BinaryOp{std::string(text), "binary_expression", prec, 1};
        }
        return std::nullopt;
    }

    AstNode parse_expression() { return parse_binary(1); }

    AstNode parse_binary(int min_prec) {
        AstNode lhs = parse_prefix();
        while (true) {
            auto op = binary_op();
            if (!op || op->precedence < min_prec) break;
            for (int i = 0; i < op->tokens; ++i) advance();
            AstNode n = make(op->type, lhs.span.begin);
            n.children.push_back(std::move(lhs));
            if (op->type == "type_test" || op->type == "as_expression") {
                n.value = op->text;
                n.children.push_back(parse_type());
            } else {
                n.value = op->text;
                n.children.push_back(parse_binary(op->precedence + 1));
            }
            lhs = finished(std::move(n));
        }
        return lhs;
    }

    AstNode parse_prefix() {
        const Token& t = peek();
        if (t.kind == TokenKind::Operator) {
            if (t.text == "-" || t.text == "+" || t.text == "!" || t.text == "++" || t.text == "--") {
                AstNode n = make("prefix_expression", here());
                n.value = std::string(advance().text);
                n.children.push_back(parse_prefix());
                return finished(std::move(n));
            }
            if (t.text == "@") {
                parse_annotation();
                return parse_prefix();
            }
        }
        if (at_word() && at("@", 1) && adjacent(0) && at("{", 2)) {
            // Labelled lambda: run@{ ... }
            advance();
            advance();
        }
        return parse_postfix(parse_primary());
    }

    // Speculatively consumes `<...>` call type arguments; restores on failure.
    bool try_call_type_arguments() {
        if (!at("<")) return false;
        const auto save = pos_;
        try {
            skip_type_arguments();
            if ((at("(") || at("{") || at("::")) && !newline_here()) return true;
            if (at(".")) return true;
        } catch (const ParseError&) {
        }
        pos_ = save;
        return false;
    }

    AstNode parse_value_arguments() {
        AstNode args = make("value_arguments", here());
        NewlineScope scope(*this, true);
        LambdaScope lambdas(*this, true);
        expect("(");
        while (!at(")")) {
            if (at_identifier() && at("=", 1) && !at("==", 1)) {
                AstNode named = make("value_argument", here());
                named.value = std::string(advance().text);
                advance();
                accept("*");
                named.children.push_back(parse_expression());
                args.children.push_back(finished(std::move(named)));
            } else {
                accept("*");
                args.children.push_back(parse_expression());
            }
            if (!accept(",")) break;
        }
        expect(")");
        return finished(std::move(args));
    }

    static bool callable(const AstNode& n) {
        return n.grammar_type == "simple_identifier" || n.grammar_type == "navigation_expression" ||
               n.grammar_type == "safe_navigation_expression" || n.grammar_type == "call_expression" ||
               n.grammar_type == "this_expression" || n.grammar_type == "super_expression";
    }

    // Builds a call node from a callee: `foo(...)`, `a.foo(...)` keep the
    // name as the node value with the receiver as first child.
    AstNode make_call(AstNode callee) {
        AstNode call = make("call_expression", callee.span.begin);
        if (callee.grammar_type == "simple_identifier") {
            call.value = callee.value;
        } else if ((callee.grammar_type == "navigation_expression" ||
                    callee.grammar_type == "safe_navigation_expression") &&
                   callee.value) {
            call.value = callee.value;
            if (callee.grammar_type == "safe_navigation_expression") call.grammar_type = "safe_call_expression";
            for (auto& c : callee.children) call.children.push_back(std::move(c));
        } else {
            call.children.push_back(std::move(callee));
        }
        return call;
    }

    AstNode parse_postfix(AstNode expr) {
        while (true) {
            const bool nl = newline_here();
            if (at("(") && !nl) {
                AstNode call = make_call(std::move(expr));
                call.children.push_back(parse_value_arguments());
                if (at("{") && !newline_here() && !no_trailing_lambda_) call.children.push_back(parse_lambda());
                expr = finished(std::move(call));
            } else if (at_word() && at("@", 1) && adjacent(0) && at("{", 2) && !nl && !no_trailing_lambda_ &&
                       callable(expr)) {
                advance();
                advance();
                AstNode call = expr.grammar_type == "call_expression" ? std::move(expr) : make_call(std::move(expr));
                call.children.push_back(parse_lambda());
                expr = finished(std::move(call));
            } else if (at("{") && !nl && !no_trailing_lambda_ && callable(expr)) {
                if (expr.grammar_type == "call_expression") {
                    expr.children.push_back(parse_lambda());
                    finish(expr);
                } else {
                    AstNode call = make_call(std::move(expr));
                    call.children.push_back(parse_lambda());
                    expr = finished(std::move(call));
                }
            } else if (at("<") && !nl && callable(expr) && try_call_type_arguments()) {
                continue;
            } else if (at("[") && !nl) {
                NewlineScope scope(*this, true);
                advance();
                AstNode n = make("indexing_expression", expr.span.begin);
                n.children.push_back(std::move(expr));
                while (!at("]")) {
                    n.children.push_back(parse_expression());
                    if (!accept(",")) break;
                }
                expect("]");
                expr = finished(std::move(n));
            } else if (at(".") || at("?.")) {
                const bool safe = at("?.");
                advance();
                if (!at_identifier()) fail();
                AstNode n = make(safe ? "safe_navigation_expression" : "navigation_expression", expr.span.begin);
                n.value = std::string(advance().text);
                n.children.push_back(std::move(expr));
                expr = finished(std::move(n));
            } else if (at("::")) {
                advance();
                AstNode n = make("callable_reference", expr.span.begin);
                if (!at_identifier()) fail();
                n.value = std::string(advance().text);
                n.children.push_back(std::move(expr));
                expr = finished(std::move(n));
            } else if ((at("++") || at("--") || at("!!")) && !nl) {
                AstNode n = make("postfix_expression", expr.span.begin);
                n.value = std::string(advance().text);
                n.children.push_back(std::move(expr));
                expr = finished(std::move(n));
            } else {
                return expr;
            }
        }
    }

    AstNode parse_lambda() {
        AstNode n = make("lambda_literal", here());
        NewlineScope scope(*this, false);
        LambdaScope lambdas(*this, true);
        expect("{");
        // Parameters: `a, (b, c): T ->`
        const auto save = pos_;
        std::vector<AstNode> params;
        try {
            NewlineScope inner(*this, true);
            while (!at("->")) {
                AstNode p = make("lambda_parameter", here());
                if (at("(")) {
                    advance();
                    std::string names;
                    while (!at(")")) {
                        if (!names.empty()) names += ", ";
                        names += expect_word();
                        if (accept(":")) type_tokens();
                        if (!accept(",")) break;
                    }
                    expect(")");
                    p.value = names;
                } else {
                    p.value = expect_word();
                }
                if (accept(":")) p.children.push_back(parse_type());
                params.push_back(finished(std::move(p)));
                if (!accept(",")) break;
            }
            expect("->");
            for (auto& p : params) n.children.push_back(std::move(p));
        } catch (const ParseError&) {
            pos_ = save;
        }
        parse_statements(n.children);
        accept("}");
        return finished(std::move(n));
    }

    AstNode parse_if() {
        AstNode n = make("if_expression", here());
        expect("if");
        n.children.push_back(parse_paren_expression());
        if (!at("else")) n.children.push_back(parse_control_body());
        const auto save = pos_;
        accept(";");
        if (at("else")) {
            advance();
            n.children.push_back(parse_control_body());
        } else {
            pos_ = save;
        }
        return finished(std::move(n));
    }

    AstNode parse_when() {
        AstNode n = make("when_expression", here());
        expect("when");
        if (at("(")) {
            NewlineScope scope(*this, true);
            AstNode subject = make("when_subject", here());
            advance();
            const auto begin = here();
            auto mods = parse_modifiers();
            if (auto decl = parse_declaration(begin, mods, DeclContext::Local)) {
                subject.children.push_back(finished(std::move(*decl)));
            } else {
                subject.children.push_back(parse_expression());
            }
            expect(")");
            n.children.push_back(finished(std::move(subject)));
        }
        NewlineScope scope(*this, false);
        expect("{");
        while (!at("}") && !at_end()) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                AstNode entry = make("when_entry", here());
                if (at("else") && at("->", 1)) {
                    advance();
                    entry.value = "else";
                } else {
                    NewlineScope conds(*this, true);
                    do {
                        entry.children.push_back(parse_when_condition());
                    } while (accept(","));
                }
                expect("->");
                entry.children.push_back(parse_control_body());
                n.children.push_back(finished(std::move(entry)));
            } catch (const ParseError&) {
                n.children.push_back(recover(start, true));
            }
            if (pos_ == start) n.children.push_back(recover(start, true));
        }
        accept("}");
        return finished(std::move(n));
    }

    AstNode parse_when_condition() {
        const auto begin = here();
        if (at("in") || (at("!") && at("in", 1) && adjacent(0))) {
            AstNode n = make("range_test", begin);
            n.value = at("in") ? "in" : "!in";
            if (!at("in")) advance();
            advance();
            n.children.push_back(parse_expression());
            return finished(std::move(n));
        }
        if (at("is") || (at("!") && at("is", 1) && adjacent(0))) {
            AstNode n = make("type_test", begin);
            n.value = at("is") ? "is" : "!is";
            if (!at("is")) advance();
            advance();
            n.children.push_back(parse_type());
            return finished(std::move(n));
        }
        return parse_expression();
    }

    AstNode parse_try() {
        AstNode n = make("try_expression", here());
        expect("try");
        n.children.push_back(parse_block());
        while (at("catch")) {
            AstNode c = make("catch_block", here());
            advance();
            {
                NewlineScope scope(*this, true);
                expect("(");
                while (at("@")) parse_annotation();
                c.value = expect_word();
                expect(":");
                c.children.push_back(parse_type());
                accept(",");
                expect(")");
            }
            c.children.push_back(parse_block());
            n.children.push_back(finished(std::move(c)));
        }
        if (at("finally")) {
            AstNode f = make("finally_block", here());
            advance();
            f.children.push_back(parse_block());
            n.children.push_back(finished(std::move(f)));
        }
        return finished(std::move(n));
    }

    bool jump_has_operand() const {
        if (newline_here()) return false;
        const Token& t = peek();
        if (t.kind == TokenKind::End) return false;
        if (t.kind == TokenKind::Operator) {
            return t.text != "}" && t.text != ")" && t.text != "]" && t.text != ";" && t.text != "," &&
                   t.text != "->" && t.text != ":" && t.text != "=" && t.text != "?:";
        }
        return !(t.kind == TokenKind::Identifier && (t.text == "else" || t.text == "catch" || t.text == "finally"));
    }

    AstNode parse_jump() {
        const std::string word(peek().text);
        AstNode n = make(word + "_expression", here());
        advance();
        if (at("@") && peek().begin == prev_end()) {
            advance();
            if (peek().kind == TokenKind::Identifier) n.children.push_back(leaf("simple_identifier"));
        }
        if ((word == "return" || word == "throw") && jump_has_operand()) n.children.push_back(parse_expression());
        return finished(std::move(n));
    }

    AstNode parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Integer: return leaf("integer_literal");
            case TokenKind::Float: return leaf("real_literal");
            case TokenKind::String: return leaf("string_literal");
            case TokenKind::Char: return leaf("character_literal");
            case TokenKind::End: fail();
            case TokenKind::Operator:
                if (t.text == "(") return parse_paren_expression();
                if (t.text == "{") return parse_lambda();
                if (t.text == "::") {
                    AstNode n = make("callable_reference", here());
                    advance();
                    if (!at_identifier()) fail();
                    n.value = std::string(advance().text);
                    return finished(std::move(n));
                }
                if (t.text == "[") {
                    AstNode n = make("collection_literal", here());
                    NewlineScope scope(*this, true);
                    advance();
                    while (!at("]")) {
                        n.children.push_back(parse_expression());
                        if (!accept(",")) break;
                    }
                    expect("]");
                    return finished(std::move(n));
                }
                fail();
            case TokenKind::Identifier:
                break;
        }
        const auto word = t.text;
        if (word == "true" || word == "false") return leaf("boolean_literal");
        if (word == "null") return leaf("null_literal");
        if (word == "if") return parse_if();
        if (word == "when") return parse_when();
        if (word == "try") return parse_try();
        if (word == "return" || word == "throw" || word == "break" || word == "continue") return parse_jump();
        if (word == "this" || word == "super") {
            AstNode n = make(word == "this" ? "this_expression" : "super_expression", here());
            n.value = std::string(advance().text);
            if (at("<") && word == "super") skip_type_arguments();
            if (at("@") && peek().begin == prev_end()) {
                advance();
                *n.value += "@" + expect_word();
            }
            return finished(std::move(n));
        }
        if (word == "object") {
            AstNode n = make("object_literal", here());
            advance();
            if (at(":")) {
                advance();
                n.children.push_back(parse_delegation_specifiers());
            }
            n.children.push_back(parse_class_body(false));
            return finished(std::move(n));
        }
        if (word == "fun") {
            AstNode n = make("anonymous_function", here());
            advance();
            parse_function_parameters(n.children);
            if (at(":")) {
                advance();
                n.children.push_back(parse_type());
            }
            parse_function_body(n.children);
            return finished(std::move(n));
        }
        if (!at_word()) fail();
        return leaf("simple_identifier");
    }

    std::vector<bool> ignore_newlines_;
    bool no_trailing_lambda_ = false;
};

}  // namespace

AstNode parse_kotlin(std::string_view source) {
    return KotlinParser(source).parse_file();
}

}  // namespace j2k::detail
