#pragma once

#include <cstddef>
#include <string_view>

namespace j2k {

enum class Language { Java, Kotlin, Other };

std::string_view to_string(Language language);

/// .java is Java, .kt and .kts are Kotlin, everything else is Other.
Language detect_language(std::string_view path);

/// Lines that are neither blank nor comment-only. Java and Kotlin recognise
/// `//` and `/* */` comments; Other counts non-blank lines.
///
/// This is a line scanner, not a lexer: comment markers inside string
/// literals are treated as real comments. An unterminated block comment runs
/// to end of input.
std::size_t count_sloc(std::string_view content, Language language);

}  // namespace j2k
