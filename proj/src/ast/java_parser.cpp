#include "parser_base.hpp"
#include "parsers.hpp"

#include <array>
#include <optional>

namespace j2k::detail {
namespace {

constexpr auto kReserved = std::to_array<std::string_view>({
    "abstract", "assert",     "boolean",   "break",     "byte",       "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",    "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",    "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",       "interface",
    "long",     "native",     "new",       "package",   "private",    "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",      "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",        "void",      "volatile",
    "while",
});

constexpr auto kPrimitives = std::to_array<std::string_view>({
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
});

constexpr auto kModifiers = std::to_array<std::string_view>({
    "public", "protected", "private",  "static",   "abstract",  "final",  "native",
    "synchronized", "transient", "volatile", "strictfp", "default", "sealed",
});

constexpr auto kAssignOps = std::to_array<std::string_view>({
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
});

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
    for (auto v : set) {
        if (v == s) return true;
    }
    return false;
}

bool is_type_keyword(std::string_view s) {
    return s == "class" || s == "interface" || s == "enum" || s == "record";
}

class JavaParser : public ParserBase {
public:
    explicit JavaParser(std::string_view source) : ParserBase(source, Language::Java) {}

    AstNode parse_program() {
        AstNode root = make("program", 0);
        while (!at_end()) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                if (at("package")) {
                    root.children.push_back(parse_package());
                } else if (at("import")) {
                    root.children.push_back(parse_import());
                } else {
                    const auto begin = here();
                    auto mods = parse_modifiers();
                    if (!at_type_declaration()) fail();
                    root.children.push_back(parse_type_declaration(begin, std::move(mods)));
                }
            } catch (const ParseError&) {
                root.children.push_back(recover(start, false));
            }
        }
        root.span.end = source_.size();
        return root;
    }

private:
    bool at_word(std::size_t n = 0) const {
        return at_identifier(n) && !contains(kReserved, peek(n).text);
    }
    bool at_primitive(std::size_t n = 0) const {
        return at_identifier(n) && contains(kPrimitives, peek(n).text);
    }
    bool at_type_declaration() const {
        return (at_identifier() && is_type_keyword(peek().text) &&
                !(peek().text == "record" && !at_word(1))) ||
               (at("@") && at("interface", 1));
    }

    std::string expect_word() {
        if (!at_word()) fail();
        return std::string(advance().text);
    }

    std::string qualified_name() {
        std::string name = expect_word();
        while (at(".") && at_identifier(1)) {
            advance();
            name += '.';
            name += advance().text;
        }
        return name;
    }

    AstNode parse_package() {
        AstNode n = make("package_declaration", here());
        expect("package");
        n.value = qualified_name();
        expect(";");
        return finished(std::move(n));
    }

    AstNode parse_import() {
        AstNode n = make("import_declaration", here());
        expect("import");
        std::string name;
        if (accept("static")) name = "static ";
        name += expect_word();
        while (accept(".")) {
            name += '.';
            if (accept("*")) {
                name += '*';
                break;
            }
            name += advance().text;
        }
        n.value = name;
        expect(";");
        return finished(std::move(n));
    }

    // ---- modifiers and annotations -------------------------------------

    std::optional<AstNode> parse_modifiers() {
        AstNode n = make("modifiers", here());
        std::string words;
        bool any = false;
        while (true) {
            if (at("@") && !at("interface", 1)) {
                n.children.push_back(parse_annotation());
                any = true;
            } else if (at_identifier() && contains(kModifiers, peek().text) &&
                       !(peek().text == "synchronized" && at("(", 1)) &&
                       !(peek().text == "default" && (at(":", 1) || at("->", 1)))) {
                if (!words.empty()) words += ' ';
                words += advance().text;
                any = true;
            } else if (at("non") && at("-", 1) && at("sealed", 2)) {
                advance();
                advance();
                advance();
                if (!words.empty()) words += ' ';
                words += "non-sealed";
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
        n.value = qualified_name();
        if (at("(")) {
            advance();
            while (!at(")")) {
                if (at_word() && at("=", 1)) {
                    AstNode pair = make("element_value_pair", here());
                    pair.value = std::string(advance().text);
                    advance();
                    pair.children.push_back(parse_element_value());
                    n.children.push_back(finished(std::move(pair)));
                } else {
                    n.children.push_back(parse_element_value());
                }
                if (!accept(",")) break;
            }
            expect(")");
        }
        return finished(std::move(n));
    }

    AstNode parse_element_value() {
        if (at("@")) return parse_annotation();
        if (at("{")) {
            AstNode arr = make("element_value_array", here());
            advance();
            while (!at("}")) {
                arr.children.push_back(parse_element_value());
                if (!accept(",")) break;
            }
            expect("}");
            return finished(std::move(arr));
        }
        return parse_ternary();
    }

    // ---- types ----------------------------------------------------------

    void skip_type_annotations() {
        while (at("@") && !at("interface", 1)) parse_annotation();
    }

    void skip_type_arguments() {
        expect("<");
        while (!at(">")) {
            skip_type_annotations();
            if (accept("?")) {
                if (accept("extends") || accept("super")) type_tokens();
            } else {
                type_tokens();
            }
            if (!accept(",")) break;
        }
        expect(">");
    }

    // Consumes one type; throws if none is present.
    void type_tokens() {
        skip_type_annotations();
        if (at_primitive()) {
            advance();
        } else if (at_word() || at("var")) {
            advance();
            if (at("<")) skip_type_arguments();
            while (at(".") && at_word(1)) {
                advance();
                advance();
                if (at("<")) skip_type_arguments();
            }
        } else {
            fail();
        }
        while (at("[") && at("]", 1)) {
            advance();
            advance();
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

    AstNode parse_type_list(std::string type) {
        AstNode n = make(std::move(type), here());
        advance();  // extends / implements / throws / permits
        n.children.push_back(parse_type());
        while (accept(",")) n.children.push_back(parse_type());
        return finished(std::move(n));
    }

    // ---- declarations ---------------------------------------------------

    AstNode parse_type_declaration(std::uint32_t begin, std::optional<AstNode> mods) {
        std::string type;
        if (at("@")) {
            advance();
            type = "annotation_type_declaration";
        } else if (at("class")) {
            type = "class_declaration";
        } else if (at("interface")) {
            type = "interface_declaration";
        } else if (at("enum")) {
            type = "enum_declaration";
        } else {
            type = "record_declaration";
        }
        const bool is_enum = at("enum");
        const bool is_record = at("record");
        const bool is_annotation_type = type == "annotation_type_declaration";
        advance();

        AstNode n = make(type, begin);
        if (mods) n.children.push_back(std::move(*mods));
        n.value = expect_word();
        if (at("<")) n.children.push_back(parse_type_parameters());
        if (is_record) {
            AstNode comps = make("record_components", here());
            parse_parameters(comps.children);
            n.children.push_back(finished(std::move(comps)));
        }
        while (true) {
            if (at("extends")) {
                n.children.push_back(parse_type_list(type == "interface_declaration" ? "extends_interfaces" : "superclass"));
            } else if (at("implements")) {
                n.children.push_back(parse_type_list("super_interfaces"));
            } else if (at("permits")) {
                n.children.push_back(parse_type_list("permits"));
            } else {
                break;
            }
        }
        n.children.push_back(parse_class_body(is_enum, is_record || is_annotation_type));
        return finished(std::move(n));
    }

    AstNode parse_class_body(bool is_enum, bool compact_ctor_allowed) {
        AstNode body = make(is_enum ? "enum_body" : "class_body", here());
        expect("{");
        if (is_enum) parse_enum_constants(body.children);
        while (!at("}") && !at_end()) {
            const auto start = pos_;
            try {
                parse_member(body.children, compact_ctor_allowed);
            } catch (const ParseError&) {
                body.children.push_back(recover(start, false));
            }
        }
        accept("}");
        return finished(std::move(body));
    }

    void parse_enum_constants(std::vector<AstNode>& out) {
        while (!at(";") && !at("}") && !at_end()) {
            const auto start = pos_;
            try {
                const auto begin = here();
                auto mods = parse_modifiers();
                AstNode c = make("enum_constant", begin);
                if (mods) c.children.push_back(std::move(*mods));
                c.value = expect_word();
                if (at("(")) c.children.push_back(parse_arguments());
                if (at("{")) c.children.push_back(parse_class_body(false, false));
                out.push_back(finished(std::move(c)));
                if (!accept(",")) break;
            } catch (const ParseError&) {
                out.push_back(recover(start, false));
            }
        }
        accept(";");
    }

    void parse_member(std::vector<AstNode>& out, bool compact_ctor_allowed) {
        if (accept(";")) return;
        const auto begin = here();
        auto mods = parse_modifiers();
        if (at("{")) {
            AstNode init = make("initializer", begin);
            if (mods) init.children.push_back(std::move(*mods));
            init.children.push_back(parse_block());
            out.push_back(finished(std::move(init)));
            return;
        }
        if (at_type_declaration()) {
            out.push_back(parse_type_declaration(begin, std::move(mods)));
            return;
        }
        std::optional<AstNode> type_params;
        if (at("<")) type_params = parse_type_parameters();

        if (at_word() && (at("(", 1) || (compact_ctor_allowed && at("{", 1)))) {
            AstNode ctor = make("constructor_declaration", begin);
            if (mods) ctor.children.push_back(std::move(*mods));
            if (type_params) ctor.children.push_back(std::move(*type_params));
            ctor.value = expect_word();
            if (at("(")) parse_parameters(ctor.children);
            if (at("throws")) ctor.children.push_back(parse_type_list("throws"));
            ctor.children.push_back(parse_block());
            out.push_back(finished(std::move(ctor)));
            return;
        }

        AstNode type = parse_type();
        if (at_word() && at("(", 1)) {
            AstNode m = make("method_declaration", begin);
            if (mods) m.children.push_back(std::move(*mods));
            if (type_params) m.children.push_back(std::move(*type_params));
            m.value = expect_word();
            m.children.push_back(std::move(type));
            parse_parameters(m.children);
            while (at("[") && at("]", 1)) {
                advance();
                advance();
            }
            if (at("throws")) m.children.push_back(parse_type_list("throws"));
            if (at("default")) {
                AstNode def = make("default_value", here());
                advance();
                def.children.push_back(parse_element_value());
                m.children.push_back(finished(std::move(def)));
            }
            if (at("{")) m.children.push_back(parse_block());
            else expect(";");
            out.push_back(finished(std::move(m)));
            return;
        }

        AstNode field = make("field_declaration", begin);
        if (mods) field.children.push_back(std::move(*mods));
        field.children.push_back(std::move(type));
        field.value = parse_declarators(field.children);
        expect(";");
        out.push_back(finished(std::move(field)));
    }

    void parse_parameters(std::vector<AstNode>& out) {
        expect("(");
        while (!at(")")) {
            out.push_back(parse_formal_parameter());
            if (!accept(",")) break;
        }
        expect(")");
    }

    AstNode parse_formal_parameter() {
        const auto begin = here();
        auto mods = parse_modifiers();
        AstNode p = make("formal_parameter", begin);
        if (mods) p.children.push_back(std::move(*mods));
        AstNode type = parse_type();
        if (at("...")) {
            advance();
            *type.value += "...";
            finish(type);
        }
        p.children.push_back(std::move(type));
        if (at("this")) {
            advance();
            p.value = "this";
        } else {
            p.value = expect_word();
        }
        while (at("[") && at("]", 1)) {
            advance();
            advance();
        }
        return finished(std::move(p));
    }

    // "a = 1, b[] = {2}" -> appends initializers, returns "a, b".
    std::string parse_declarators(std::vector<AstNode>& out) {
        std::string names;
        do {
            if (!names.empty()) names += ", ";
            names += expect_word();
            while (at("[") && at("]", 1)) {
                advance();
                advance();
            }
            if (accept("=")) out.push_back(parse_variable_initializer());
        } while (accept(","));
        return names;
    }

    AstNode parse_variable_initializer() {
        if (at("{")) return parse_array_initializer();
        return parse_expression();
    }

    AstNode parse_array_initializer() {
        AstNode n = make("array_initializer", here());
        expect("{");
        while (!at("}")) {
            n.children.push_back(parse_variable_initializer());
            if (!accept(",")) break;
        }
        expect("}");
        return finished(std::move(n));
    }

    // ---- statements -----------------------------------------------------

    AstNode parse_block() {
        AstNode block = make("block", here());
        expect("{");
        parse_block_statements(block.children, [&] { return at("}"); });
        accept("}");
        return finished(std::move(block));
    }

    template <typename Stop>
    void parse_block_statements(std::vector<AstNode>& out, Stop stop) {
        while (!at_end() && !stop()) {
            const auto start = pos_;
            try {
                if (accept(";")) continue;
                out.push_back(parse_statement());
            } catch (const ParseError&) {
                out.push_back(recover(start, false));
            }
            if (pos_ == start) out.push_back(recover(start, false));
        }
    }

    // Local variable declaration or local type, or nullopt (cursor restored).
    std::optional<AstNode> try_local_declaration(bool require_semicolon) {
        const auto save = pos_;
        const auto begin = here();
        auto mods = parse_modifiers();
        if (at_type_declaration()) return parse_type_declaration(begin, std::move(mods));

        std::optional<AstNode> type;
        try {
            type = parse_type();
        } catch (const ParseError&) {
            if (mods) throw;
            pos_ = save;
            return std::nullopt;
        }
        const bool declares = at_word() && (at("=", 1) || at(";", 1) || at(",", 1) || at("[", 1) || at(":", 1) ||
                                            at(")", 1));
        if (!declares) {
            if (mods) fail();
            pos_ = save;
            return std::nullopt;
        }
        AstNode decl = make("local_variable_declaration", begin);
        if (mods) decl.children.push_back(std::move(*mods));
        decl.children.push_back(std::move(*type));
        decl.value = parse_declarators(decl.children);
        if (require_semicolon) expect(";");
        return finished(std::move(decl));
    }

    AstNode parse_statement() {
        if (at("{")) return parse_block();
        if (at_identifier()) {
            const auto word = peek().text;
            if (word == "if") return parse_if();
            if (word == "while") return parse_while();
            if (word == "do") return parse_do();
            if (word == "for") return parse_for();
            if (word == "switch" && !at(".", 1)) {
                AstNode s = parse_switch("switch_statement");
                accept(";");
                return s;
            }
            if (word == "return") return parse_simple_keyword_statement("return_statement", true);
            if (word == "throw") return parse_simple_keyword_statement("throw_statement", true);
            if (word == "break" || word == "continue") {
                AstNode n = make(word == "break" ? "break_statement" : "continue_statement", here());
                advance();
                if (at_word()) n.children.push_back(leaf("identifier"));
                expect(";");
                return finished(std::move(n));
            }
            if (word == "try") return parse_try();
            if (word == "synchronized" && at("(", 1)) {
                AstNode n = make("synchronized_statement", here());
                advance();
                expect("(");
                n.children.push_back(parse_expression());
                expect(")");
                n.children.push_back(parse_block());
                return finished(std::move(n));
            }
            if (word == "assert") {
                AstNode n = make("assert_statement", here());
                advance();
                n.children.push_back(parse_expression());
                if (accept(":")) n.children.push_back(parse_expression());
                expect(";");
                return finished(std::move(n));
            }
            if (word == "yield" && !at("=", 1) && !at("(", 1) && !at(".", 1) && !at(";", 1)) {
                return parse_simple_keyword_statement("yield_statement", true);
            }
            if (at_word() && at(":", 1) && !at(":", 2)) {
                AstNode n = make("labeled_statement", here());
                n.value = std::string(advance().text);
                advance();
                n.children.push_back(parse_statement());
                return finished(std::move(n));
            }
            if (word == "else" || word == "case" || word == "catch" || word == "finally") fail();
        }
        if (auto decl = try_local_declaration(true)) return std::move(*decl);

        AstNode stmt = make("expression_statement", here());
        stmt.children.push_back(parse_expression());
        expect(";");
        return finished(std::move(stmt));
    }

    AstNode parse_simple_keyword_statement(std::string type, bool optional_expr) {
        AstNode n = make(std::move(type), here());
        advance();
        if (!optional_expr || !at(";")) n.children.push_back(parse_expression());
        expect(";");
        return finished(std::move(n));
    }

    AstNode parse_paren_condition() {
        expect("(");
        AstNode cond = parse_expression();
        expect(")");
        return cond;
    }

    AstNode parse_if() {
        AstNode n = make("if_statement", here());
        expect("if");
        n.children.push_back(parse_paren_condition());
        n.children.push_back(parse_statement());
        if (accept("else")) n.children.push_back(parse_statement());
        return finished(std::move(n));
    }

    AstNode parse_while() {
        AstNode n = make("while_statement", here());
        expect("while");
        n.children.push_back(parse_paren_condition());
        n.children.push_back(parse_statement());
        return finished(std::move(n));
    }

    AstNode parse_do() {
        AstNode n = make("do_statement", here());
        expect("do");
        n.children.push_back(parse_statement());
        expect("while");
        n.children.push_back(parse_paren_condition());
        expect(";");
        return finished(std::move(n));
    }

    AstNode parse_for() {
        const auto begin = here();
        expect("for");
        expect("(");
        // Enhanced for: [mods] Type name ':'
        {
            const auto save = pos_;
            try {
                const auto mods_begin = here();
                auto mods = parse_modifiers();
                AstNode type = parse_type();
                if (at_word() && at(":", 1)) {
                    AstNode n = make("enhanced_for_statement", begin);
                    AstNode var = make("local_variable_declaration", mods_begin);
                    if (mods) var.children.push_back(std::move(*mods));
                    var.children.push_back(std::move(type));
                    var.value = std::string(advance().text);
                    n.children.push_back(finished(std::move(var)));
                    expect(":");
                    n.children.push_back(parse_expression());
                    expect(")");
                    n.children.push_back(parse_statement());
                    return finished(std::move(n));
                }
            } catch (const ParseError&) {
            }
            pos_ = save;
        }
        AstNode n = make("for_statement", begin);
        if (!at(";")) {
            if (auto decl = try_local_declaration(false)) {
                n.children.push_back(std::move(*decl));
            } else {
                n.children.push_back(parse_expression());
                while (accept(",")) n.children.push_back(parse_expression());
            }
        }
        expect(";");
        if (!at(";")) n.children.push_back(parse_expression());
        expect(";");
        if (!at(")")) {
            n.children.push_back(parse_expression());
            while (accept(",")) n.children.push_back(parse_expression());
        }
        expect(")");
        n.children.push_back(parse_statement());
        return finished(std::move(n));
    }

    AstNode parse_try() {
        AstNode n = make("try_statement", here());
        expect("try");
        if (at("(")) {
            AstNode res = make("resource_specification", here());
            advance();
            while (!at(")")) {
                if (auto decl = try_local_declaration(false)) res.children.push_back(std::move(*decl));
                else res.children.push_back(parse_expression());
                if (!accept(";")) break;
            }
            expect(")");
            n.children.push_back(finished(std::move(res)));
        }
        n.children.push_back(parse_block());
        while (at("catch")) {
            AstNode c = make("catch_clause", here());
            advance();
            expect("(");
            const auto begin = here();
            auto mods = parse_modifiers();
            if (mods) c.children.push_back(std::move(*mods));
            const auto from = pos_;
            AstNode types = make("catch_type", begin);
            type_tokens();
            while (accept("|")) type_tokens();
            types.value = joined_text(from);
            c.children.push_back(finished(std::move(types)));
            c.value = expect_word();
            expect(")");
            c.children.push_back(parse_block());
            n.children.push_back(finished(std::move(c)));
        }
        if (at("finally")) {
            AstNode f = make("finally_clause", here());
            advance();
            f.children.push_back(parse_block());
            n.children.push_back(finished(std::move(f)));
        }
        return finished(std::move(n));
    }

    AstNode parse_switch(std::string type) {
        AstNode n = make(std::move(type), here());
        expect("switch");
        n.children.push_back(parse_paren_condition());
        AstNode block = make("switch_block", here());
        expect("{");
        while (!at("}") && !at_end()) {
            const auto start = pos_;
            try {
                if (!at("case") && !at("default")) fail();
                AstNode label = make("switch_label", here());
                if (accept("default")) {
                    label.value = "default";
                } else {
                    advance();
                    label.children.push_back(parse_case_pattern());
                    while (accept(",")) label.children.push_back(parse_case_pattern());
                }
                if (at("->")) {
                    finish(label);
                    advance();
                    AstNode rule = make("switch_rule", label.span.begin);
                    rule.children.push_back(std::move(label));
                    if (at("{")) {
                        rule.children.push_back(parse_block());
                    } else if (at("throw")) {
                        rule.children.push_back(parse_simple_keyword_statement("throw_statement", false));
                    } else {
                        AstNode stmt = make("expression_statement", here());
                        stmt.children.push_back(parse_expression());
                        expect(";");
                        rule.children.push_back(finished(std::move(stmt)));
                    }
                    block.children.push_back(finished(std::move(rule)));
                } else {
                    expect(":");
                    block.children.push_back(finished(std::move(label)));
                    parse_block_statements(block.children,
                                           [&] { return at("}") || at("case") || at("default"); });
                }
            } catch (const ParseError&) {
                block.children.push_back(recover(start, false));
            }
        }
        accept("}");
        n.children.push_back(finished(std::move(block)));
        return finished(std::move(n));
    }

    AstNode parse_case_pattern() {
        // Type patterns: `case Foo f ->`
        const auto save = pos_;
        try {
            const auto begin = here();
            const auto from = pos_;
            type_tokens();
            if (at_word() && (at("->", 1) || at(":", 1) || at(",", 1))) {
                AstNode p = make("type_pattern", begin);
                AstNode t = make("type", begin);
                t.value = joined_text(from);
                t.span.end = prev_end();
                p.value = std::string(advance().text);
                p.children.push_back(std::move(t));
                finish(p);
                return p;
            }
        } catch (const ParseError&) {
        }
        pos_ = save;
        return parse_ternary();
    }

    // ---- expressions ----------------------------------------------------

    AstNode parse_expression() { return parse_assignment(); }

    bool lambda_ahead() const {
        if (at_word() && at("->", 1)) return true;
        if (!at("(")) return false;
        int depth = 0;
        for (std::size_t i = 0;; ++i) {
            const Token& t = peek(i);
            if (t.kind == TokenKind::End) return false;
            if (t.kind != TokenKind::Operator) continue;
            if (t.text == "(") ++depth;
            else if (t.text == ")" && --depth == 0) return peek(i + 1).text == "->" && peek(i + 1).kind == TokenKind::Operator;
        }
    }

    AstNode parse_lambda() {
        AstNode n = make("lambda_expression", here());
        if (at_word()) {
            AstNode p = make("inferred_parameter", here());
            p.value = std::string(advance().text);
            n.children.push_back(finished(std::move(p)));
        } else {
            expect("(");
            while (!at(")")) {
                if (at_word() && (at(",", 1) || at(")", 1))) {
                    AstNode p = make("inferred_parameter", here());
                    p.value = std::string(advance().text);
                    n.children.push_back(finished(std::move(p)));
                } else {
                    n.children.push_back(parse_formal_parameter());
                }
                if (!accept(",")) break;
            }
            expect(")");
        }
        expect("->");
        n.children.push_back(at("{") ? parse_block() : parse_expression());
        return finished(std::move(n));
    }

    // Assignment operator at the cursor (re-joining split '>' tokens).
    std::optional<std::pair<std::string, int>> assignment_op() const {
        if (peek().kind != TokenKind::Operator) return std::nullopt;
        if (at(">") && adjacent(0) && at(">", 1)) {
            if (adjacent(1) && at(">", 2) && adjacent(2) && at("=", 3)) return std::pair{std::string(">>>="), 4};
            if (adjacent(1) && at("=", 2)) return std::pair{std::string(">>="), 3};
            return std::nullopt;
        }
        if (contains(kAssignOps, peek().text)) return std::pair{std::string(peek().text), 1};
        return std::nullopt;
    }

    AstNode parse_assignment() {
        if (lambda_ahead()) return parse_lambda();
        AstNode lhs = parse_ternary();
        if (auto op = assignment_op()) {
            for (int i = 0; i < op->second; ++i) advance();
            AstNode n = make("assignment_expression", lhs.span.begin);
            n.value = op->first;
            n.children.push_back(std::move(lhs));
            n.children.push_back(parse_assignment());
            return finished(std::move(n));
        }
        return lhs;
    }

    AstNode parse_ternary() {
        AstNode cond = parse_binary(1);
        if (!at("?")) return cond;
        advance();
        AstNode n = make("ternary_expression", cond.span.begin);
        n.children.push_back(std::move(cond));
        n.children.push_back(lambda_ahead() ? parse_lambda() : parse_ternary());
        expect(":");
        n.children.push_back(lambda_ahead() ? parse_lambda() : parse_ternary());
        return finished(std::move(n));
    }

    struct BinaryOp {
        std::string text;
        int precedence = 0;
        int tokens = 1;
    };

    std::optional<BinaryOp> binary_op() const {
        const Token& t = peek();
        if (t.kind == TokenKind::Identifier && t.text == "instanceof") return BinaryOp{"instanceof", 7, 1};
        if (t.kind != TokenKind::Operator) return std::nullopt;
        if (t.text == ">") {
            if (adjacent(0) && at(">", 1)) {
                if (adjacent(1) && at(">", 2)) {
                    if (adjacent(2) && at("=", 3)) return std::nullopt;
                    return BinaryOp{">>>", 8, 3};
                }
                if (adjacent(1) && at("=", 2)) return std::nullopt;
                return BinaryOp{">>", 8, 2};
            }
            if (adjacent(0) && at("=", 1)) return BinaryOp{">=", 7, 2};
            return BinaryOp{">", 7, 1};
        }
        static constexpr std::array<std::pair<std::string_view, int>, 15> kTable{{
            {"||", 1}, {"&&", 2}, {"|", 3}, {"^", 4}, {"&", 5}, {"==", 6}, {"!=", 6}, {"<", 7},
            {"<=", 7}, {"<<", 8}, {"+", 9}, {"-", 9}, {"*", 10}, {"/", 10}, {"%", 10},
        }};
        for (const auto& [text, prec] : kTable) {
            if (t.text == text) return BinaryOp{std::string(text), prec, 1};
        }
        return std::nullopt;
    }

    AstNode parse_binary(int min_prec) {
        AstNode lhs = parse_unary();
        while (true) {
            auto op = binary_op();
            if (!op || op->precedence < min_prec) break;
            for (int i = 0; i < op->tokens; ++i) advance();
            if (op->text == "instanceof") {
                AstNode n = make("instanceof_expression", lhs.span.begin);
                n.children.push_back(std::move(lhs));
                accept("final");
                n.children.push_back(parse_type());
                if (at_word()) n.value = std::string(advance().text);
                lhs = finished(std::move(n));
                continue;
            }
            AstNode rhs = parse_binary(op->precedence + 1);
            AstNode n = make("binary_expression", lhs.span.begin);
            n.value = op->text;
            n.children.push_back(std::move(lhs));
            n.children.push_back(std::move(rhs));
            lhs = finished(std::move(n));
        }
        return lhs;
    }

    bool cast_ahead() {
        if (!at("(")) return false;
        const auto save = pos_;
        bool result = false;
        try {
            advance();
            const bool primitive = at_primitive() && !at("void");
            type_tokens();
            while (accept("&")) type_tokens();
            if (at(")")) {
                advance();
                const Token& t = peek();
                if (primitive) {
                    result = t.kind != TokenKind::End;
                } else {
                    result = (t.kind == TokenKind::Identifier && (!contains(kReserved, t.text) || t.text == "new" ||
                                                                  t.text == "this" || t.text == "super" ||
                                                                  t.text == "switch")) ||
                             t.kind == TokenKind::Integer || t.kind == TokenKind::Float ||
                             t.kind == TokenKind::String || t.kind == TokenKind::Char ||
                             (t.kind == TokenKind::Operator && (t.text == "(" || t.text == "!" || t.text == "~"));
                }
            }
        } catch (const ParseError&) {
        }
        pos_ = save;
        return result;
    }

    AstNode parse_unary() {
        const Token& t = peek();
        if (t.kind == TokenKind::Operator) {
            if (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "~") {
                AstNode n = make("unary_expression", here());
                n.value = std::string(advance().text);
                n.children.push_back(parse_unary());
                return finished(std::move(n));
            }
            if (t.text == "++" || t.text == "--") {
                AstNode n = make("prefix_update_expression", here());
                n.value = std::string(advance().text);
                n.children.push_back(parse_unary());
                return finished(std::move(n));
            }
            if (t.text == "(" && cast_ahead()) {
                AstNode n = make("cast_expression", here());
                advance();
                const auto from = pos_;
                AstNode type = make("type", here());
                type_tokens();
                while (accept("&")) type_tokens();
                type.value = joined_text(from);
                n.children.push_back(finished(std::move(type)));
                expect(")");
                n.children.push_back(lambda_ahead() ? parse_lambda() : parse_unary());
                return finished(std::move(n));
            }
        }
        return parse_postfix(parse_primary());
    }

    AstNode parse_arguments() {
        AstNode args = make("argument_list", here());
        expect("(");
        while (!at(")")) {
            args.children.push_back(parse_expression());
            if (!accept(",")) break;
        }
        expect(")");
        return finished(std::move(args));
    }

    AstNode parse_postfix(AstNode expr) {
        while (true) {
            if (at(".")) {
                advance();
                if (at("<")) skip_type_arguments();
                if (at("new")) {
                    AstNode creation = parse_creation();
                    AstNode n = make("qualified_creation_expression", expr.span.begin);
                    n.children.push_back(std::move(expr));
                    n.children.push_back(std::move(creation));
                    expr = finished(std::move(n));
                    continue;
                }
                if (at("class")) {
                    advance();
                    AstNode n = make("class_literal", expr.span.begin);
                    n.children.push_back(std::move(expr));
                    expr = finished(std::move(n));
                    continue;
                }
                if (!at_identifier()) fail();
                const std::string name(advance().text);
                if (at("(")) {
                    AstNode n = make("method_invocation", expr.span.begin);
                    n.value = name;
                    n.children.push_back(std::move(expr));
                    n.children.push_back(parse_arguments());
                    expr = finished(std::move(n));
                } else {
                    AstNode n = make("field_access", expr.span.begin);
                    n.value = name;
                    n.children.push_back(std::move(expr));
                    expr = finished(std::move(n));
                }
            } else if (at("[")) {
                advance();
                AstNode n = make("array_access", expr.span.begin);
                n.children.push_back(std::move(expr));
                n.children.push_back(parse_expression());
                expect("]");
                expr = finished(std::move(n));
            } else if (at("::")) {
                advance();
                if (at("<")) skip_type_arguments();
                AstNode n = make("method_reference", expr.span.begin);
                if (!at_identifier()) fail();
                n.value = std::string(advance().text);
                n.children.push_back(std::move(expr));
                expr = finished(std::move(n));
            } else if (at("++") || at("--")) {
                AstNode n = make("postfix_update_expression", expr.span.begin);
                n.value = std::string(advance().text);
                n.children.push_back(std::move(expr));
                expr = finished(std::move(n));
            } else {
                return expr;
            }
        }
    }

    AstNode parse_creation() {
        AstNode n = make("object_creation_expression", here());
        expect("new");
        if (at("<")) skip_type_arguments();
        const auto from = pos_;
        skip_type_annotations();
        if (at_primitive()) {
            advance();
        } else {
            if (!at_word()) fail();
            advance();
            if (at("<")) skip_type_arguments();
            while (at(".") && at_word(1)) {
                advance();
                advance();
                if (at("<")) skip_type_arguments();
            }
        }
        n.value = joined_text(from);
        if (at("[")) {
            n.grammar_type = "array_creation_expression";
            while (at("[")) {
                advance();
                if (!at("]")) n.children.push_back(parse_expression());
                expect("]");
            }
            if (at("{")) n.children.push_back(parse_array_initializer());
            return finished(std::move(n));
        }
        n.children.push_back(parse_arguments());
        if (at("{")) n.children.push_back(parse_class_body(false, false));
        return finished(std::move(n));
    }

    AstNode parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Integer: return leaf("integer_literal");
            case TokenKind::Float: return leaf("floating_point_literal");
            case TokenKind::String: return leaf("string_literal");
            case TokenKind::Char: return leaf("character_literal");
            case TokenKind::End: fail();
            case TokenKind::Operator:
                if (t.text == "(") {
                    advance();
                    AstNode inner = parse_expression();
                    expect(")");
                    return inner;
                }
                if (t.text == "@") {
                    skip_type_annotations();
                    return parse_primary();
                }
                fail();
            case TokenKind::Identifier:
                break;
        }
        const auto word = t.text;
        if (word == "true" || word == "false") return leaf("boolean_literal");
        if (word == "null") return leaf("null_literal");
        if (word == "new") return parse_creation();
        if (word == "switch") return parse_switch("switch_expression");
        if (word == "this" || word == "super") {
            if (at("(", 1)) {
                AstNode n = make("method_invocation", here());
                n.value = std::string(advance().text);
                n.children.push_back(parse_arguments());
                return finished(std::move(n));
            }
            return leaf(std::string(word));
        }
        if (at_primitive()) {
            // int.class, int[].class
            const auto from = pos_;
            AstNode type = make("type", here());
            type_tokens();
            type.value = joined_text(from);
            finish(type);
            if (at("::")) return type;
            expect(".");
            expect("class");
            AstNode n = make("class_literal", type.span.begin);
            n.children.push_back(std::move(type));
            return finished(std::move(n));
        }
        if (!at_word()) fail();
        if (at("(", 1)) {
            AstNode n = make("method_invocation", here());
            n.value = std::string(advance().text);
            n.children.push_back(parse_arguments());
            return finished(std::move(n));
        }
        // Foo[]::new, String[].class
        if (at("[", 1) && at("]", 2)) {
            const auto from = pos_;
            AstNode type = make("type", here());
            type_tokens();
            type.value = joined_text(from);
            finish(type);
            if (accept(".")) {
                expect("class");
                AstNode n = make("class_literal", type.span.begin);
                n.children.push_back(std::move(type));
                return finished(std::move(n));
            }
            return type;
        }
        // Generic type before a method reference: List<String>::new
        if (at("<", 1)) {
            const auto save = pos_;
            try {
                const auto from = pos_;
                AstNode type = make("type", here());
                type_tokens();
                if (at("::")) {
                    type.value = joined_text(from);
                    return finished(std::move(type));
                }
            } catch (const ParseError&) {
            }
            pos_ = save;
        }
        return leaf("identifier");
    }
};

}  // namespace

AstNode parse_java(std::string_view source) {
    return JavaParser(source).parse_program();
}

}  // namespace j2k::detail
