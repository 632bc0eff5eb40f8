#include "j2k/language.hpp"

#include "j2k/repository.hpp"

namespace j2k {

std::string_view to_string(Language language) {
    switch (language) {
        case Language::Java: return "Java";
        case Language::Kotlin: return "Kotlin";
        case Language::Other: return "Other";
    }
    return "Other";
}

Language detect_language(std::string_view path) {
    const auto ext = path_extension(path);
    if (ext == "java") return Language::Java;
    if (ext == "kt" || ext == "kts") return Language::Kotlin;
    return Language::Other;
}

namespace {

bool is_blank(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::size_t count_sloc(std::string_view content, Language language) {
    const bool c_like = language != Language::Other;
    std::size_t count = 0;
    bool in_block = false;
    bool line_has_code = false;

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (c == '\n') {
            if (line_has_code) ++count;
            line_has_code = false;
            continue;
        }
        if (in_block) {
            if (c == '*' && i + 1 < content.size() && content[i + 1] == '/') {
                in_block = false;
                ++i;
            }
            continue;
        }
        if (is_blank(c)) continue;
        if (c_like && c == '/' && i + 1 < content.size()) {
            if (content[i + 1] == '/') {
                while (i + 1 < content.size() && content[i + 1] != '\n') ++i;
                continue;
            }
            if (content[i + 1] == '*') {
                in_block = true;
                ++i;
                continue;
            }
        }
        line_has_code = true;
    }
    if (line_has_code) ++count;
    return count;
}

}  // namespace j2k
