#include "j2k/ast.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace j2k {

namespace resources {
extern const std::string_view java_kinds;
extern const std::string_view kotlin_kinds;
}  // namespace resources

namespace {

using Tag = UnifiedKind::Tag;

struct KindNames {
    Tag tag;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<KindNames, 13> kKindNames{{
    {Tag::CompilationUnit, "CompilationUnit", "Compilation Unit"},
    {Tag::Class, "Class", "Class"},
    {Tag::Method, "Method", "Method"},
    {Tag::Property, "Property", "Property Declaration"},
    {Tag::LocalVariable, "LocalVariable", "Local Variable"},
    {Tag::Invocation, "Invocation", "Invocation"},
    {Tag::If, "If", "If"},
    {Tag::Assignment, "Assignment", "Assignment"},
    {Tag::Return, "Return", "Return"},
    {Tag::Block, "Block", "Block"},
    {Tag::Parameter, "Parameter", "Parameter"},
    {Tag::Literal, "Literal", "Literal"},
    {Tag::Identifier, "Identifier", "Identifier"},
}};

constexpr std::string_view kOtherPrefix = "Other:";

}  // namespace

std::string UnifiedKind::name() const {
    if (tag_ == Tag::Other) return std::string(kOtherPrefix) + other_name_;
    for (const auto& k : kKindNames) {
        if (k.tag == tag_) return std::string(k.name);
    }
    return "Other:";
}

std::string UnifiedKind::label() const {
    if (tag_ == Tag::Other) return other_name_;
    for (const auto& k : kKindNames) {
        if (k.tag == tag_) return std::string(k.label);
    }
    return other_name_;
}

UnifiedKind UnifiedKind::parse(std::string_view name) {
    if (name.starts_with(kOtherPrefix)) {
        const auto rest = name.substr(kOtherPrefix.size());
        if (rest.empty()) throw std::invalid_argument("empty Other kind name");
        return other(std::string(rest));
    }
    for (const auto& k : kKindNames) {
        if (k.name == name) return UnifiedKind(k.tag);
    }
    throw std::invalid_argument("unknown unified kind: " + std::string(name));
}

KindMap KindMap::parse(std::string_view text) {
    KindMap map;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string type, kind, extra;
        if (!(fields >> type)) continue;
        if (!(fields >> kind) || (fields >> extra)) {
            throw std::invalid_argument("kind map line " + std::to_string(line_no) + ": expected two fields");
        }
        if (!map.entries_.emplace(type, UnifiedKind::parse(kind)).second) {
            throw std::invalid_argument("kind map line " + std::to_string(line_no) + ": duplicate " + type);
        }
    }
    return map;
}

const KindMap& KindMap::builtin(Language language) {
    static const KindMap java = parse(resources::java_kinds);
    static const KindMap kotlin = parse(resources::kotlin_kinds);
    if (language == Language::Kotlin) return kotlin;
    if (language == Language::Java) return java;
    throw std::invalid_argument("no kind map for language Other");
}

UnifiedKind KindMap::lookup(std::string_view grammar_type) const {
    if (auto it = entries_.find(grammar_type); it != entries_.end()) return it->second;
    return UnifiedKind::other(std::string(grammar_type));
}

bool KindMap::contains(std::string_view grammar_type) const {
    return entries_.find(grammar_type) != entries_.end();
}

LoadedKindMaps::LoadedKindMaps(const std::filesystem::path& dir) {
    auto load = [&](const char* file) -> std::optional<KindMap> {
        std::ifstream in(dir / file);
        if (!in) return std::nullopt;
        std::ostringstream text;
        text << in.rdbuf();
        return KindMap::parse(text.str());
    };
    java_ = load("java.kinds");
    kotlin_ = load("kotlin.kinds");
}

KindMaps LoadedKindMaps::maps() const {
    KindMaps maps;
    if (java_) maps.java = &*java_;
    if (kotlin_) maps.kotlin = &*kotlin_;
    return maps;
}

}  // namespace j2k
