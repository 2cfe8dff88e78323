#include "slakit/vocabulary.hpp"

namespace slakit {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Category>, 2> kCategories{{
    {"slo", Category::slo},
    {"config", Category::config},
}};

constexpr std::array<std::pair<std::string_view, ValueType>, 5> kValueTypes{{
    {"numeric", ValueType::numeric},
    {"percentage", ValueType::percentage},
    {"enum", ValueType::enumeration},
    {"boolean", ValueType::boolean},
    {"string", ValueType::string},
}};

constexpr std::array<std::pair<std::string_view, Operator>, 6> kOperators{{
    {"lt", Operator::lt},
    {"lte", Operator::lte},
    {"gt", Operator::gt},
    {"gte", Operator::gte},
    {"eq", Operator::eq},
    {"neq", Operator::neq},
}};

constexpr std::array<std::pair<std::string_view, ResourceKind>, 2> kKinds{{
    {"deployment_layer", ResourceKind::deployment_layer},
    {"programming_model", ResourceKind::programming_model},
}};

constexpr std::array<std::pair<std::string_view, Priority>, 3> kPriorities{{
    {"high", Priority::high},
    {"normal", Priority::normal},
    {"low", Priority::low},
}};

}  // namespace

std::string_view to_string(Category c) { return name_of(c, kCategories); }
std::string_view to_string(ValueType t) { return name_of(t, kValueTypes); }
std::string_view to_string(Operator op) { return name_of(op, kOperators); }
std::string_view to_string(ResourceKind k) { return name_of(k, kKinds); }
std::string_view to_string(Priority p) { return name_of(p, kPriorities); }

std::optional<Category> parse_category(std::string_view s) { return lookup(s, kCategories); }
std::optional<ValueType> parse_value_type(std::string_view s) { return lookup(s, kValueTypes); }
std::optional<Operator> parse_operator(std::string_view s) { return lookup(s, kOperators); }
std::optional<ResourceKind> parse_resource_kind(std::string_view s) { return lookup(s, kKinds); }
std::optional<Priority> parse_priority(std::string_view s) { return lookup(s, kPriorities); }

bool is_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

}  // namespace slakit
