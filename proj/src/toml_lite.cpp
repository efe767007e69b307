#include "mtop/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "mtop/errors.hpp"

namespace mtop::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config parse error (line " + std::to_string(line) + "): " + message);
}

[[noreturn]] void type_error(std::string_view path, const char* expected) {
    throw ConfigError("config: '" + std::string(path) + "' is not " + expected);
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        const char c = text[pos++];
        if (c == '\n') {
            ++line;
        }
        return c;
    }
    // Skips spaces, comments and (when `newlines`) line breaks.
    void skip_ws(bool newlines) {
        while (!done()) {
            const char c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') {
                    take();
                }
            } else if (c == ' ' || c == '\t' || c == '\r') {
                take();
            } else if (newlines && c == '\n') {
                take();
            } else {
                break;
            }
        }
    }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

std::string parse_bare_key(Cursor& cur) {
    std::string key;
    while (!cur.done() && is_bare_key_char(cur.peek())) {
        key.push_back(cur.take());
    }
    if (key.empty()) {
        fail(cur.line, "expected a key");
    }
    return key;
}

Value parse_value(Cursor& cur);

Value parse_string(Cursor& cur) {
    cur.take();  // opening quote
    std::string out;
    while (true) {
        if (cur.done()) {
            fail(cur.line, "unterminated string");
        }
        const char c = cur.take();
        if (c == '"') {
            break;
        }
        if (c == '\\') {
            if (cur.done()) {
                fail(cur.line, "unterminated escape");
            }
            const char esc = cur.take();
            switch (esc) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                default: fail(cur.line, "unsupported escape sequence");
            }
        } else {
            out.push_back(c);
        }
    }
    return Value(std::move(out));
}

Value parse_array(Cursor& cur) {
    cur.take();  // '['
    Array items;
    while (true) {
        cur.skip_ws(true);
        if (cur.done()) {
            fail(cur.line, "unterminated array");
        }
        if (cur.peek() == ']') {
            cur.take();
            break;
        }
        items.push_back(parse_value(cur));
        cur.skip_ws(true);
        if (cur.done()) {
            fail(cur.line, "unterminated array");
        }
        if (cur.peek() == ',') {
            cur.take();
        } else if (cur.peek() != ']') {
            fail(cur.line, "expected ',' or ']' in array");
        }
    }
    return Value(std::move(items));
}

Value parse_scalar(Cursor& cur) {
    std::string token;
    while (!cur.done()) {
        const char c = cur.peek();
        if (c == ',' || c == ']' || c == '\n' || c == '#' || c == ' ' || c == '\t' || c == '\r') {
            break;
        }
        token.push_back(cur.take());
    }
    if (token == "true") {
        return Value(true);
    }
    if (token == "false") {
        return Value(false);
    }
    if (token.empty()) {
        fail(cur.line, "expected a value");
    }
    char* end = nullptr;
    const double d = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
        fail(cur.line, "cannot parse value '" + token + "'");
    }
    return Value(d);
}

Value parse_value(Cursor& cur) {
    cur.skip_ws(false);
    if (cur.done()) {
        fail(cur.line, "expected a value");
    }
    const char c = cur.peek();
    if (c == '"') {
        return parse_string(cur);
    }
    if (c == '[') {
        return parse_array(cur);
    }
    return parse_scalar(cur);
}

Table& descend(Value& root, const std::vector<std::string>& path, int line) {
    Table* table = &root.as_table("<root>");
    for (const std::string& part : path) {
        Value& slot = (*table)[part];
        if (!slot.is_table()) {
            if (slot.is_array() || slot.is_number() || slot.is_string() || slot.is_bool()) {
                fail(line, "'" + part + "' is both a value and a table");
            }
            slot = Value(Table{});
        }
        table = &slot.as_table(part);
    }
    return *table;
}

}  // namespace

double Value::as_number(std::string_view path) const {
    if (const double* d = std::get_if<double>(&data_)) {
        return *d;
    }
    type_error(path, "a number");
}

long long Value::as_integer(std::string_view path) const {
    const double d = as_number(path);
    const long long i = static_cast<long long>(d);
    if (static_cast<double>(i) != d) {
        type_error(path, "an integer");
    }
    return i;
}

bool Value::as_bool(std::string_view path) const {
    if (const bool* b = std::get_if<bool>(&data_)) {
        return *b;
    }
    type_error(path, "a boolean");
}

const std::string& Value::as_string(std::string_view path) const {
    if (const std::string* s = std::get_if<std::string>(&data_)) {
        return *s;
    }
    type_error(path, "a string");
}

const Array& Value::as_array(std::string_view path) const {
    if (const Array* a = std::get_if<Array>(&data_)) {
        return *a;
    }
    type_error(path, "an array");
}

const Table& Value::as_table(std::string_view path) const {
    if (const Table* t = std::get_if<Table>(&data_)) {
        return *t;
    }
    type_error(path, "a table");
}

Table& Value::as_table(std::string_view path) {
    if (Table* t = std::get_if<Table>(&data_)) {
        return *t;
    }
    type_error(path, "a table");
}

const Value* Value::find(std::string_view key) const {
    const Table& table = as_table(key);
    const auto it = table.find(std::string(key));
    return it == table.end() ? nullptr : &it->second;
}

const Value& Value::at(std::string_view path) const {
    const Value* current = this;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string_view key =
            dot == std::string_view::npos ? path.substr(start) : path.substr(start, dot - start);
        const Table& table = current->as_table(path);
        const auto it = table.find(std::string(key));
        if (it == table.end()) {
            throw ConfigError("config: missing key '" + std::string(path) + "'");
        }
        current = &it->second;
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    return *current;
}

std::vector<double> Value::as_number_array(std::string_view path) const {
    const Array& arr = as_array(path);
    std::vector<double> out;
    out.reserve(arr.size());
    for (const Value& v : arr) {
        out.push_back(v.as_number(path));
    }
    return out;
}

Value parse(std::string_view text) {
    Value root{Table{}};
    Cursor cur{text};
    std::vector<std::string> current_path;

    while (true) {
        cur.skip_ws(true);
        if (cur.done()) {
            break;
        }
        if (cur.peek() == '[') {
            cur.take();
            std::vector<std::string> path;
            while (true) {
                cur.skip_ws(false);
                path.push_back(parse_bare_key(cur));
                cur.skip_ws(false);
                if (cur.done()) {
                    fail(cur.line, "unterminated table header");
                }
                if (cur.peek() == '.') {
                    cur.take();
                    continue;
                }
                if (cur.peek() == ']') {
                    cur.take();
                    break;
                }
                fail(cur.line, "expected '.' or ']' in table header");
            }
            descend(root, path, cur.line);
            current_path = std::move(path);
            continue;
        }
        const int line = cur.line;
        const std::string key = parse_bare_key(cur);
        cur.skip_ws(false);
        if (cur.done() || cur.peek() != '=') {
            fail(line, "expected '=' after key '" + key + "'");
        }
        cur.take();
        Value value = parse_value(cur);
        Table& table = descend(root, current_path, line);
        if (table.contains(key)) {
            fail(line, "duplicate key '" + key + "'");
        }
        table.emplace(key, std::move(value));
    }
    return root;
}

}  // namespace mtop::toml
