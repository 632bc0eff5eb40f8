#pragma once

#include "j2k/language.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace j2k::detail {

enum class TokenKind { Identifier, Integer, Float, String, Char, Operator, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string_view text;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    bool newline_before = false;
};

/// Comments and whitespace are dropped. `>` is always a single token; the
/// parser re-joins `>>` and `>=`.
/// Unknown bytes become one-character Operator tokens. The last token is End.
std::vector<Token> lex(std::string_view source, Language language);

}  // namespace j2k::detail
