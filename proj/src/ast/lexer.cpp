#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace j2k::detail {
namespace {

bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Longest first.
constexpr std::array<std::string_view, 27> kOperators{
    "...", "..<", "===", "!==", "<<=", "->", "::", "?.", "?:", "!!", "==", "!=", "<=", "&&",
    "||",  "++",  "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "<<", "..",
};

class Lexer {
public:
    Lexer(std::string_view src, Language lang) : src_(src), kotlin_(lang == Language::Kotlin) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        if (src_.starts_with("#!")) skip_line();
        while (true) {
            skip_trivia();
            Token t;
            t.newline_before = newline_;
            newline_ = false;
            t.begin = static_cast<std::uint32_t>(pos_);
            if (pos_ >= src_.size()) {
                t.kind = TokenKind::End;
                t.end = t.begin;
                tokens.push_back(t);
                return tokens;
            }
            t.kind = scan();
            pos_ = std::min(pos_, src_.size());
            t.end = static_cast<std::uint32_t>(pos_);
            t.text = src_.substr(t.begin, t.end - t.begin);
            tokens.push_back(t);
        }
    }

private:
    char at(std::size_t off = 0) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }

    void skip_line() {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                newline_ = true;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else if (c == '/' && at(1) == '/') {
                skip_line();
            } else if (c == '/' && at(1) == '*') {
                skip_block_comment();
            } else {
                return;
            }
        }
    }

    void skip_block_comment() {
        pos_ += 2;
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
            if (src_[pos_] == '\n') newline_ = true;
            if (src_[pos_] == '*' && at(1) == '/') {
                --depth;
                pos_ += 2;
            } else if (kotlin_ && src_[pos_] == '/' && at(1) == '*') {
                ++depth;
                pos_ += 2;
            } else {
                ++pos_;
            }
        }
    }

    TokenKind scan() {
        const auto c = static_cast<unsigned char>(src_[pos_]);
        if (kotlin_ && c == '`') {
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '`' && src_[pos_] != '\n') ++pos_;
            if (at() == '`') ++pos_;
            return TokenKind::Identifier;
        }
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return TokenKind::Identifier;
        }
        if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(at(1))))) return scan_number();
        if (c == '"') {
            if (at(1) == '"' && at(2) == '"') scan_triple_string();
            else scan_string();
            return TokenKind::String;
        }
        if (c == '\'') {
            scan_char();
            return TokenKind::Char;
        }
        for (auto op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                pos_ += op.size();
                return TokenKind::Operator;
            }
        }
        ++pos_;
        return TokenKind::Operator;
    }

    TokenKind scan_number() {
        bool is_float = false;
        if (at() == '0' && (at(1) == 'x' || at(1) == 'X' || at(1) == 'b' || at(1) == 'B')) {
            pos_ += 2;
            while (pos_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        } else {
            auto digits = [&] {
                while (pos_ < src_.size() && (is_digit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            };
            digits();
            // `1..2` is a range, `1.foo()` a call on an int.
            if (at() == '.' && is_digit(static_cast<unsigned char>(at(1)))) {
                is_float = true;
                ++pos_;
                digits();
            } else if (!kotlin_ && at() == '.' && at(1) != '.' && !is_ident_start(static_cast<unsigned char>(at(1)))) {
                is_float = true;
                ++pos_;
            }
            if (at() == 'e' || at() == 'E') {
                const char sign = at(1);
                if (is_digit(static_cast<unsigned char>(sign)) ||
                    ((sign == '+' || sign == '-') && is_digit(static_cast<unsigned char>(at(2))))) {
                    is_float = true;
                    pos_ += (sign == '+' || sign == '-') ? 2 : 1;
                    digits();
                }
            }
        }
        while (pos_ < src_.size()) {
            const char s = src_[pos_];
            if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
                is_float = true;
                ++pos_;
            } else if (s == 'l' || s == 'L' || s == 'u' || s == 'U') {
                ++pos_;
            } else {
                break;
            }
        }
        return is_float ? TokenKind::Float : TokenKind::Integer;
    }

    void scan_string() {
        ++pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\') {
                pos_ += 2;
            } else if (c == '"') {
                ++pos_;
                return;
            } else if (c == '\n') {
                return;  // unterminated; the line ends the literal
            } else if (kotlin_ && c == '$' && at(1) == '{') {
                skip_template_expression();
            } else {
                ++pos_;
            }
        }
    }

    void scan_triple_string() {
        pos_ += 3;
        while (pos_ < src_.size()) {
            if (src_[pos_] == '"' && at(1) == '"' && at(2) == '"') {
                pos_ += 3;
                while (at() == '"') ++pos_;
                return;
            }
            if (!kotlin_ && src_[pos_] == '\\') {
                pos_ += 2;
                continue;
            }
            if (kotlin_ && src_[pos_] == '$' && at(1) == '{') {
                skip_template_expression();
                continue;
            }
            ++pos_;
        }
    }

    // At "${": skip to the matching '}', honouring nested strings.
    void skip_template_expression() {
        pos_ += 2;
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
            const char c = src_[pos_];
            if (c == '{') {
                ++depth;
                ++pos_;
            } else if (c == '}') {
                --depth;
                ++pos_;
            } else if (c == '"') {
                if (at(1) == '"' && at(2) == '"') scan_triple_string();
                else scan_string();
            } else if (c == '\'') {
                scan_char();
            } else {
                ++pos_;
            }
        }
    }

    void scan_char() {
        ++pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\') {
                pos_ += 2;
            } else if (c == '\'') {
                ++pos_;
                return;
            } else if (c == '\n') {
                return;
            } else {
                ++pos_;
            }
        }
    }

    std::string_view src_;
    bool kotlin_;
    std::size_t pos_ = 0;
    bool newline_ = false;
};

}  // namespace

std::vector<Token> lex(std::string_view source, Language language) {
    return Lexer(source, language).run();
}

}  // namespace j2k::detail
