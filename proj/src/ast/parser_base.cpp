#include "parser_base.hpp"

#include <algorithm>

namespace j2k::detail {

namespace {

bool word_like(const Token& t) {
    return t.kind == TokenKind::Identifier || t.kind == TokenKind::Integer || t.kind == TokenKind::Float;
}

}  // namespace

std::string ParserBase::joined_text(std::size_t from) const {
    std::string out;
    for (std::size_t i = from; i < pos_ && i < tokens_.size(); ++i) {
        if (i > from && word_like(tokens_[i]) && word_like(tokens_[i - 1])) out += ' ';
        if (i > from && tokens_[i].text == "->") out += ' ';
        out += tokens_[i].text;
        if (tokens_[i].text == "->" || tokens_[i].text == ",") out += ' ';
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

AstNode ParserBase::recover(std::size_t from, bool newline_stops) {
    pos_ = from;
    AstNode err = make("error", here());
    std::vector<char> stack;
    bool consumed = false;
    while (!at_end()) {
        const Token& t = peek();
        if (consumed && newline_stops && stack.empty() && t.newline_before) break;
        if (t.kind == TokenKind::Operator && t.text.size() == 1) {
            const char c = t.text[0];
            if (c == '(' || c == '[' || c == '{') {
                stack.push_back(c);
            } else if (c == ')' || c == ']') {
                const char open = c == ')' ? '(' : '[';
                if (!stack.empty() && stack.back() == open) stack.pop_back();
            } else if (c == '}') {
                while (!stack.empty() && stack.back() != '{') stack.pop_back();
                if (stack.empty() && consumed) break;  // belongs to an enclosing construct
                if (stack.empty()) {
                    advance();
                    consumed = true;
                    break;
                }
                stack.pop_back();
                advance();
                consumed = true;
                if (stack.empty()) break;
                continue;
            } else if (c == ';' && std::find(stack.begin(), stack.end(), '{') == stack.end()) {
                advance();
                consumed = true;
                break;
            }
        }
        advance();
        consumed = true;
    }
    return finished(std::move(err));
}

void ParserBase::skip_balanced() {
    std::vector<char> stack;
    do {
        const Token& t = peek();
        if (t.kind == TokenKind::End) fail();
        if (t.kind == TokenKind::Operator && t.text.size() == 1) {
            const char c = t.text[0];
            if (c == '(' || c == '[' || c == '{') stack.push_back(c);
            else if (c == ')' || c == ']' || c == '}') {
                if (!stack.empty()) stack.pop_back();
            }
        }
        advance();
    } while (!stack.empty());
}

}  // namespace j2k::detail
