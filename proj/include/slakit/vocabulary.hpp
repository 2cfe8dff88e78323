#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace slakit {

enum class Category { slo, config };
enum class ValueType { numeric, percentage, enumeration, boolean, string };
enum class Operator { lt, lte, gt, gte, eq, neq };
enum class ResourceKind { deployment_layer, programming_model };
enum class Priority { high, normal, low };

inline constexpr std::array kAllOperators{Operator::lt,  Operator::lte, Operator::gt,
                                          Operator::gte, Operator::eq,  Operator::neq};
inline constexpr std::array kAllPriorities{Priority::high, Priority::normal, Priority::low};

std::string_view to_string(Category c);
std::string_view to_string(ValueType t);
std::string_view to_string(Operator op);
std::string_view to_string(ResourceKind k);
std::string_view to_string(Priority p);

std::optional<Category> parse_category(std::string_view s);
std::optional<ValueType> parse_value_type(std::string_view s);
std::optional<Operator> parse_operator(std::string_view s);
std::optional<ResourceKind> parse_resource_kind(std::string_view s);
std::optional<Priority> parse_priority(std::string_view s);

/// ^[a-z][a-z0-9_]*$
bool is_identifier(std::string_view s);

}  // namespace slakit
