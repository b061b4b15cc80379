#include "qsis/config.hpp"

#include <cctype>
#include <cmath>

#include "qsis/error.hpp"

namespace qsis {

namespace {

struct ConfigLexer {
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::usage, "config text at offset " + std::to_string(i) + ": " + what);
  }

  // whitespace, separators and comments between entries
  void skip_separators() {
    while (i < s.size()) {
      char c = s[i];
      if (c == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') {
        ++i;
      } else {
        break;
      }
    }
  }
  void skip_blank() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  }

  std::string key() {
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '-')) ++i;
    if (i == start) fail("expected a key");
    return s.substr(start, i - start);
  }

  nlohmann::json scalar_from(const std::string& word) {
    if (word == "true") return true;
    if (word == "false") return false;
    try {
      size_t used = 0;
      double v = std::stod(word, &used);
      if (used == word.size()) {
        // keep integers integral so they round-trip as ints
        if (word.find_first_of(".eE") == std::string::npos && std::fabs(v) < 9e15)
          return static_cast<long long>(v);
        return v;
      }
    } catch (const std::exception&) {
    }
    return word;
  }

  nlohmann::json value(bool in_list) {
    skip_blank();
    if (i >= s.size()) fail("missing value");
    if (s[i] == '"') {
      ++i;
      std::string out;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        out += s[i++];
      }
      if (i >= s.size()) fail("unterminated string");
      ++i;
      return out;
    }
    if (s[i] == '[') {
      ++i;
      nlohmann::json arr = nlohmann::json::array();
      while (true) {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
        if (i >= s.size()) fail("unterminated list");
        if (s[i] == ']') { ++i; break; }
        arr.push_back(value(true));
      }
      return arr;
    }
    // bare word: balanced parentheses may contain separators
    size_t start = i;
    int depth = 0;
    while (i < s.size()) {
      char c = s[i];
      if (c == '(') ++depth;
      else if (c == ')') --depth;
      else if (depth == 0 && (c == ',' || c == '\n' || c == ';' || c == '#' || (in_list && c == ']'))) break;
      ++i;
    }
    std::string word = s.substr(start, i - start);
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.pop_back();
    if (word.empty()) fail("empty value");
    return scalar_from(word);
  }
};

}  // namespace

nlohmann::json parse_config_text(const std::string& text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      auto j = nlohmann::json::parse(text);
      if (!j.is_object()) throw Error(ErrorKind::usage, "config JSON must be an object");
      return j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::usage, std::string("config JSON: ") + e.what());
    }
  }
  nlohmann::json out = nlohmann::json::object();
  ConfigLexer lx{text};
  while (true) {
    lx.skip_separators();
    if (lx.i >= text.size()) break;
    std::string k = lx.key();
    lx.skip_blank();
    if (lx.i >= text.size() || (text[lx.i] != '=' && text[lx.i] != ':')) lx.fail("expected '=' after '" + k + "'");
    ++lx.i;
    if (out.contains(k)) lx.fail("duplicate key '" + k + "'");
    out[k] = lx.value(false);
  }
  return out;
}

}  // namespace qsis
