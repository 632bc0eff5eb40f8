#pragma once

#include "lexer.hpp"

#include "j2k/ast.hpp"

#include <algorithm>

#include <string>
#include <string_view>
#include <vector>

namespace j2k::detail {

/// Thrown inside a parser to unwind to the nearest recovery point.
struct ParseError {};

/// Token cursor, node construction and panic-mode recovery shared by the
/// Java and Kotlin parsers. Nodes are built with grammar_type only; kinds and
/// ids are filled in afterwards.
class ParserBase {
protected:
    ParserBase(std::string_view source, Language language)
        : source_(source), tokens_(lex(source, language)) {}

    const Token& peek(std::size_t n = 0) const {
        const auto i = pos_ + n;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at_end() const { return peek().kind == TokenKind::End; }
    bool at(std::string_view text, std::size_t n = 0) const {
        const auto& t = peek(n);
        return t.kind != TokenKind::End && t.kind != TokenKind::String && t.kind != TokenKind::Char &&
               t.text == text;
    }
    bool at_identifier(std::size_t n = 0) const { return peek(n).kind == TokenKind::Identifier; }
    /// Tokens n and n+1 touch with no whitespace between them.
    bool adjacent(std::size_t n = 0) const { return peek(n).end == peek(n + 1).begin; }

    const Token& advance() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }
    bool accept(std::string_view text) {
        if (!at(text)) return false;
        advance();
        return true;
    }
    void expect(std::string_view text) {
        if (!accept(text)) fail();
    }
    [[noreturn]] void fail() const { throw ParseError{}; }

    std::uint32_t here() const { return peek().begin; }
    std::uint32_t prev_end() const { return pos_ == 0 ? 0 : tokens_[pos_ - 1].end; }

    static AstNode make(std::string type, std::uint32_t begin) {
        AstNode n;
        n.grammar_type = std::move(type);
        n.span = {begin, begin};
        return n;
    }
    AstNode& finish(AstNode& n) const {
        n.span.end = std::max<std::size_t>(n.span.begin, prev_end());
        return n;
    }
    AstNode&& finished(AstNode&& n) const {
        finish(n);
        return std::move(n);
    }
    /// Consumes one token as a leaf whose value is the token text.
    AstNode leaf(std::string type) {
        const Token& t = advance();
        AstNode n = make(std::move(type), t.begin);
        n.value = std::string(t.text);
        n.span.end = t.end;
        return n;
    }

    /// Text of tokens [from, pos_) with a space only between word-like tokens.
    std::string joined_text(std::size_t from) const;

    /// Skips a broken region starting at token index `from` and returns an
    /// Other("error") node covering it. Always consumes at least one token
    /// unless already at '}' or End. Stops before an unmatched '}', after a
    /// ';' or a '}' that closes the region, or (when `newline_stops`) at a
    /// line break outside brackets.
    AstNode recover(std::size_t from, bool newline_stops);

    /// Skips a balanced (), [] or {} group starting at the current opener.
    void skip_balanced();

    std::string_view source_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace j2k::detail
