#include "linkage/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace linkage {

double ConfigNode::number(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing key: " + key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw ConfigError("trailing junk in value of " + key);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: " + key + " = " + it->second);
    }
}

double ConfigNode::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int ConfigNode::integer(const std::string& key) const {
    const double v = number(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError("not an integer: " + key);
    return i;
}

int ConfigNode::integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string ConfigNode::word(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing key: " + key);
    return it->second;
}

std::string ConfigNode::word_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? word(key) : fallback;
}

const ConfigNode& ConfigNode::block(const std::string& key) const {
    auto it = blocks.find(key);
    if (it == blocks.end()) throw ConfigError("missing block: " + key);
    return it->second;
}

namespace {

struct Token {
    enum Kind { Word, Equals, OpenBrace, CloseBrace, End } kind;
    std::string text;
    int line;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (c == '=') {
            tokens.push_back({Token::Equals, "=", line});
            ++i;
        } else if (c == '{') {
            tokens.push_back({Token::OpenBrace, "{", line});
            ++i;
        } else if (c == '}') {
            tokens.push_back({Token::CloseBrace, "}", line});
            ++i;
        } else {
            std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '=' && text[i] != '{' && text[i] != '}' && text[i] != '#')
                ++i;
            tokens.push_back({Token::Word, text.substr(start, i - start), line});
        }
    }
    tokens.push_back({Token::End, "", line});
    return tokens;
}

ConfigNode parse_block(const std::vector<Token>& tokens, std::size_t& pos, bool top_level) {
    ConfigNode node;
    while (true) {
        const Token& t = tokens[pos];
        if (t.kind == Token::End) {
            if (!top_level) throw ConfigError("unexpected end of input inside a block");
            return node;
        }
        if (t.kind == Token::CloseBrace) {
            if (top_level) throw ConfigError("unmatched '}' at line " + std::to_string(t.line));
            ++pos;
            return node;
        }
        if (t.kind != Token::Word)
            throw ConfigError("expected a key at line " + std::to_string(t.line));
        const std::string key = t.text;
        ++pos;
        const Token& next = tokens[pos];
        if (next.kind == Token::Equals) {
            ++pos;
            if (tokens[pos].kind != Token::Word)
                throw ConfigError("expected a value for " + key + " at line " +
                                  std::to_string(next.line));
            if (node.values.count(key))
                throw ConfigError("duplicate key: " + key);
            node.values[key] = tokens[pos].text;
            ++pos;
        } else if (next.kind == Token::OpenBrace) {
            ++pos;
            if (node.blocks.count(key)) throw ConfigError("duplicate block: " + key);
            node.blocks[key] = parse_block(tokens, pos, false);
        } else {
            throw ConfigError("expected '=' or '{' after " + key + " at line " +
                              std::to_string(next.line));
        }
    }
}

}  // namespace

ConfigNode parse_config(const std::string& text) {
    const auto tokens = tokenize(text);
    std::size_t pos = 0;
    return parse_block(tokens, pos, true);
}

ConfigNode parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace linkage
