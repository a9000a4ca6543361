#include "gdifs/app/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <string>
#include <vector>

namespace gdifs::app {

namespace {

class Reader {
public:
    explicit Reader(std::string_view s) : s_(s) {}

    Json document() {
        Json root = Json::object();
        Json* table = &root;
        for (;;) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                table = header(root);
            } else {
                keyval(*table);
            }
            end_of_line();
        }
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= s_.size(); }
    char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }

    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k < pos_ && k < s_.size(); ++k) {
            if (s_[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }

    void skip_ws() {
        while (peek() == ' ' || peek() == '\t') ++pos_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++pos_;
    }
    // whitespace, comments and newlines (inside arrays and inline tables)
    void skip_all() {
        for (;;) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') ++pos_;
            else break;
        }
    }
    void skip_blank_lines() { skip_all(); }

    void end_of_line() {
        skip_ws();
        skip_comment();
        if (peek() == '\r') ++pos_;
        if (eof()) return;
        if (peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
        ++pos_;
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string key_part() {
        skip_ws();
        if (peek() == '"' || peek() == '\'') return string_value();
        const std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') ++pos_;
        if (pos_ == start) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{key_part()};
        skip_ws();
        while (peek() == '.') {
            ++pos_;
            parts.push_back(key_part());
            skip_ws();
        }
        return parts;
    }

    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& p : parts) out += (out.empty() ? "" : ".") + p;
        return out;
    }

    Json* descend(Json& root, const std::vector<std::string>& path, std::size_t n) {
        Json* t = &root;
        for (std::size_t k = 0; k < n; ++k) {
            Json& next = (*t)[path[k]];
            if (next.is_null()) next = Json::object();
            if (next.is_array() && !next.empty() && next.back().is_object()) t = &next.back();
            else if (next.is_object()) t = &next;
            else fail("key '" + path[k] + "' is not a table");
        }
        return t;
    }

    Json* header(Json& root) {
        ++pos_;
        const bool array = peek() == '[';
        if (array) ++pos_;
        const auto path = dotted_key();
        expect(']');
        if (array) expect(']');

        Json* parent = descend(root, path, path.size() - 1);
        Json& slot = (*parent)[path.back()];
        if (array) {
            if (slot.is_null()) slot = Json::array();
            if (!slot.is_array()) fail("'" + join(path) + "' is already defined as a non-array");
            slot.push_back(Json::object());
            return &slot.back();
        }
        if (slot.is_null()) slot = Json::object();
        else if (!slot.is_object()) fail("'" + join(path) + "' is already defined");
        return &slot;
    }

    void keyval(Json& table) {
        const auto path = dotted_key();
        skip_ws();
        expect('=');
        skip_ws();
        Json* t = descend(table, path, path.size() - 1);
        if (t->contains(path.back())) fail("duplicate key '" + join(path) + "'");
        (*t)[path.back()] = value();
    }

    Json value() {
        const char c = peek();
        if (c == '"' || c == '\'') return string_value();
        if (c == '[') return array_value();
        if (c == '{') return inline_table();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return number_value();
    }

    std::string string_value() {
        const char quote = peek();
        ++pos_;
        std::string out;
        for (;;) {
            if (eof() || peek() == '\n') fail("unterminated string");
            char c = s_[pos_++];
            if (c == quote) break;
            if (c == '\\' && quote == '"') {
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
                continue;
            }
            out += c;
        }
        return out;
    }

    Json array_value() {
        ++pos_;
        Json arr = Json::array();
        for (;;) {
            skip_all();
            if (peek() == ']') {
                ++pos_;
                return arr;
            }
            arr.push_back(value());
            skip_all();
            if (peek() == ',') ++pos_;
            else if (peek() != ']') fail("expected ',' or ']' in array");
        }
    }

    Json inline_table() {
        ++pos_;
        Json t = Json::object();
        for (;;) {
            skip_all();
            if (peek() == '}') {
                ++pos_;
                return t;
            }
            keyval_inline(t);
            skip_all();
            if (peek() == ',') ++pos_;
            else if (peek() != '}') fail("expected ',' or '}' in inline table");
        }
    }

    void keyval_inline(Json& t) {
        const auto path = dotted_key();
        skip_ws();
        expect('=');
        skip_all();
        Json* dst = descend(t, path, path.size() - 1);
        if (dst->contains(path.back())) fail("duplicate key '" + join(path) + "'");
        (*dst)[path.back()] = value();
    }

    Json number_value() {
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                          peek() == '.' || peek() == '_'))
            ++pos_;
        std::string tok(s_.substr(start, pos_ - start));
        std::erase(tok, '_');
        if (tok.empty()) fail("expected a value");
        if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
        if (tok == "-inf") return -std::numeric_limits<double>::infinity();

        const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
        const char* e = tok.data() + tok.size();
        if (tok.find_first_of(".eE") == std::string::npos) {
            long long v = 0;
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec == std::errc() && p == e) return v;
        } else {
            double v = 0;
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec == std::errc() && p == e) return v;
        }
        pos_ = start;
        fail("invalid value '" + tok + "'");
    }
};

}  // namespace

Json parse_toml(std::string_view text) { return Reader(text).document(); }

}  // namespace gdifs::app
