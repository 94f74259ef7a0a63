#include "ucfg/alphabet.hpp"

#include <cctype>
#include <sstream>

#include "ucfg/error.hpp"

namespace ucfg {

namespace {

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error(Errc::Validation, "lang", "alphabet must have at least one letter");
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (!valid_token(letters_[i]))
      throw Error(Errc::Validation, "lang", "invalid letter token '" + letters_[i] + "'");
    if (!index_.emplace(letters_[i], static_cast<Letter>(i)).second)
      throw Error(Errc::Validation, "lang", "duplicate letter '" + letters_[i] + "'");
    if (letters_[i].size() != 1) single_char_ = false;
  }
}

Alphabet Alphabet::indexed(int n, const std::string& prefix) {
  std::vector<std::string> letters;
  for (int i = 1; i <= n; ++i) letters.push_back(prefix + std::to_string(i));
  return Alphabet(std::move(letters));
}

std::optional<Letter> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Letter Alphabet::index(std::string_view name) const {
  auto found = find(name);
  if (!found) throw Error(Errc::Validation, "lang", "unknown letter '" + std::string(name) + "'");
  return *found;
}

std::string Alphabet::render(const Word& word) const {
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (!single_char_ && i > 0) out += ' ';
    out += letters_.at(word[i]);
  }
  return out;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word word;
  if (single_char_) {
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      word.push_back(index(std::string_view(&c, 1)));
    }
    return word;
  }
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) word.push_back(index(tok));
  return word;
}

bool next_word(Word& word, int alphabet_size) {
  for (size_t i = word.size(); i-- > 0;) {
    if (++word[i] < alphabet_size) return true;
    word[i] = 0;
  }
  return false;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace ucfg
