#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mtop::toml {

// Minimal TOML subset: tables ([a.b] headers), key = value pairs, '#'
// comments, and values that are strings, booleans, numbers, or (possibly
// nested, possibly multi-line) inline arrays. Covers exactly what the
// project's configuration files use.
class Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

class Value {
  public:
    Value() : data_(std::monostate{}) {}
    explicit Value(bool b) : data_(b) {}
    explicit Value(double d) : data_(d) {}
    explicit Value(std::string s) : data_(std::move(s)) {}
    explicit Value(Array a) : data_(std::move(a)) {}
    explicit Value(Table t) : data_(std::move(t)) {}

    bool is_table() const { return std::holds_alternative<Table>(data_); }
    bool is_array() const { return std::holds_alternative<Array>(data_); }
    bool is_number() const { return std::holds_alternative<double>(data_); }
    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }

    // Accessors throw ConfigError with the offending path on a type
    // mismatch; `path` is only used for the message.
    double as_number(std::string_view path) const;
    long long as_integer(std::string_view path) const;
    bool as_bool(std::string_view path) const;
    const std::string& as_string(std::string_view path) const;
    const Array& as_array(std::string_view path) const;
    const Table& as_table(std::string_view path) const;
    Table& as_table(std::string_view path);

    // Table lookups; `find` returns nullptr when absent.
    const Value* find(std::string_view key) const;
    const Value& at(std::string_view path) const;  // dotted path
    bool contains(std::string_view key) const { return find(key) != nullptr; }

    std::vector<double> as_number_array(std::string_view path) const;

  private:
    std::variant<std::monostate, bool, double, std::string, Array, Table> data_;
};

// Parses a document into its root table. Throws ConfigError with a line
// number on malformed input.
Value parse(std::string_view text);

}  // namespace mtop::toml
