#include "config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "horizonwave/errors.hpp"

namespace horizonwave::cli {
namespace {

using nlohmann::json;

class LineParser {
public:
    LineParser(std::string_view text, int line) : s_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("config line " + std::to_string(line_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool at_end_or_comment() {
        skip_space();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string key() {
        skip_space();
        if (peek() == '"') return string();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string string() {
        expect('"');
        std::string out;
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated string");
            const char c = s_[pos_++];
            if (c == '"') return out;
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            if (pos_ >= s_.size()) fail("dangling escape");
            switch (s_[pos_++]) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                default: fail("unsupported escape");
            }
        }
    }

    json value() {
        skip_space();
        const char c = peek();
        if (c == '"') return string();
        if (c == '[') {
            ++pos_;
            json arr = json::array();
            skip_space();
            if (peek() == ']') {
                ++pos_;
                return arr;
            }
            while (true) {
                arr.push_back(value());
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    skip_space();
                    if (peek() == ']') {
                        ++pos_;
                        return arr;
                    }
                    continue;
                }
                if (peek() == ']') {
                    ++pos_;
                    return arr;
                }
                fail("expected ',' or ']' in array");
            }
        }
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

    json number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                    s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '_')) {
            ++pos_;
        }
        std::string token(s_.substr(start, pos_ - start));
        std::erase(token, '_');
        if (token.empty()) fail("expected a value");
        const bool integral = token.find_first_of(".eEn") == std::string::npos;
        const char* first = token.data() + (token.front() == '+' ? 1 : 0);
        const char* last = token.data() + token.size();
        if (integral) {
            long long v = 0;
            const auto [p, ec] = std::from_chars(first, last, v);
            if (ec == std::errc() && p == last) return v;
        } else {
            double v = 0.0;
            const auto [p, ec] = std::from_chars(first, last, v);
            if (ec == std::errc() && p == last) return v;
        }
        fail("bad value '" + token + "'");
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{key()};
        skip_space();
        while (peek() == '.') {
            ++pos_;
            parts.push_back(key());
            skip_space();
        }
        return parts;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

json& descend(json& root, const std::vector<std::string>& path, const LineParser& p) {
    json* node = &root;
    for (const auto& part : path) {
        if (!node->contains(part)) (*node)[part] = json::object();
        node = &(*node)[part];
        if (!node->is_object()) p.fail("'" + part + "' is not a table");
    }
    return *node;
}

}  // namespace

nlohmann::json parse_config(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        LineParser p(raw, line_no);
        if (p.at_end_or_comment()) continue;
        if (p.peek() == '[') {
            p.expect('[');
            const auto path = p.dotted_key();
            p.expect(']');
            if (!p.at_end_or_comment()) p.fail("trailing characters after table header");
            table = &descend(root, path, p);
            continue;
        }
        auto path = p.dotted_key();
        p.expect('=');
        json value = p.value();
        if (!p.at_end_or_comment()) p.fail("trailing characters after value");
        const std::string leaf = path.back();
        path.pop_back();
        json& target = descend(*table, path, p);
        if (target.contains(leaf)) p.fail("duplicate key '" + leaf + "'");
        target[leaf] = std::move(value);
    }
    return root;
}

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace horizonwave::cli
