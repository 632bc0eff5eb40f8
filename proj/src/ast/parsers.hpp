#pragma once

#include "j2k/ast.hpp"

#include <string_view>

namespace j2k::detail {

/// Raw trees: grammar_type, value, children and spans set; kind and id not yet.
AstNode parse_java(std::string_view source);
AstNode parse_kotlin(std::string_view source);

}  // namespace j2k::detail
