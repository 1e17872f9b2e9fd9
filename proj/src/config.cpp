#include "stochosc/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace stochosc {

using nlohmann::json;

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    json parse() {
        json root = json::object();
        json* section = nullptr;
        for (;;) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++pos_;
                skip_inline_space();
                const std::string name = bare_key();
                skip_inline_space();
                expect(']');
                end_of_line();
                if (root.contains(name)) fail("duplicate section [" + name + "]");
                root[name] = json::object();
                section = &root[name];
                continue;
            }
            const std::string key = peek() == '"' ? string_value() : bare_key();
            if (!section) fail("key '" + key + "' appears before any [section]");
            skip_inline_space();
            expect('=');
            json v = value();
            end_of_line();
            if (section->contains(key)) fail("duplicate key '" + key + "'");
            (*section)[key] = std::move(v);
        }
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++pos_;
    }

    void skip_inline_space() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
        skip_comment();
    }

    // Whitespace including newlines, as allowed inside brackets.
    void skip_space() {
        for (;;) {
            skip_inline_space();
            if (peek() != '\n') return;
            ++pos_;
            ++line_;
        }
    }

    void skip_blank_lines() { skip_space(); }

    void end_of_line() {
        skip_inline_space();
        if (eof()) return;
        if (peek() != '\n') fail("unexpected text after value");
        ++pos_;
        ++line_;
    }

    std::string bare_key() {
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
        if (start == pos_) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string string_value() {
        expect('"');
        std::string out;
        while (!eof() && peek() != '"') {
            char c = s_[pos_++];
            if (c == '\n') fail("unterminated string");
            if (c == '\\') {
                if (eof()) fail("unterminated string");
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(std::string("unknown escape \\") + e);
                }
            }
            out.push_back(c);
        }
        expect('"');
        return out;
    }

    json number() {
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                          peek() == '.' || peek() == '_'))
            ++pos_;
        std::string tok(s_.substr(start, pos_ - start));
        std::erase(tok, '_');
        if (tok.empty()) fail("expected a value");
        const bool integral = tok.find_first_of(".eEin") == std::string::npos;
        if (integral) {
            long long v = 0;
            const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
            auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
            if (ec == std::errc() && p == tok.data() + tok.size()) return v;
            unsigned long long u = 0;
            auto [pu, ecu] = std::from_chars(b, tok.data() + tok.size(), u);
            if (ecu == std::errc() && pu == tok.data() + tok.size()) return u;
        }
        double d = 0.0;
        const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
        auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), d);
        if (ec != std::errc() || p != tok.data() + tok.size()) fail("invalid value '" + tok + "'");
        return d;
    }

    json value() {
        skip_inline_space();
        const char c = peek();
        if (c == '"') return string_value();
        if (c == '[') return array();
        if (c == '{') return table();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return number();
    }

    json array() {
        expect('[');
        json out = json::array();
        skip_space();
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        for (;;) {
            skip_space();
            out.push_back(value());
            skip_space();
            if (peek() == ',') {
                ++pos_;
                skip_space();
                if (peek() == ']') break;
                continue;
            }
            break;
        }
        expect(']');
        return out;
    }

    json table() {
        expect('{');
        json out = json::object();
        skip_space();
        if (peek() == '}') {
            ++pos_;
            return out;
        }
        for (;;) {
            skip_space();
            const std::string key = peek() == '"' ? string_value() : bare_key();
            skip_space();
            if (peek() != '=' && peek() != ':') fail("expected '=' or ':' after '" + key + "'");
            ++pos_;
            skip_space();
            if (out.contains(key)) fail("duplicate key '" + key + "'");
            out[key] = value();
            skip_space();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect('}');
        return out;
    }
};

}  // namespace

json parse_config(std::string_view text) { return Parser(text).parse(); }

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace stochosc
