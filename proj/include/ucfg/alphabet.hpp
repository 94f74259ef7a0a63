#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ucfg {

using Letter = int;
/// A word is a sequence of letter indices into some Alphabet.
using Word = std::vector<Letter>;

/// Ordered list of distinct letter names; letters are referred to by index.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  /// a1, a2, ..., an
  static Alphabet indexed(int n, const std::string& prefix = "a");

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& letter(Letter index) const { return letters_.at(index); }
  const std::vector<std::string>& letters() const { return letters_; }

  std::optional<Letter> find(std::string_view name) const;
  Letter index(std::string_view name) const;  // throws on unknown names
  bool contains(std::string_view name) const { return find(name).has_value(); }

  /// Letters are concatenated when they are all one character long and
  /// space-separated otherwise. The empty word renders as "".
  std::string render(const Word& word) const;
  /// Inverse of render().
  Word parse_word(std::string_view text) const;

  bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }

 private:
  std::vector<std::string> letters_;
  std::unordered_map<std::string, Letter> index_;
  bool single_char_ = true;
};

/// Next word of the same length in length-lexicographic order; false on wrap.
bool next_word(Word& word, int alphabet_size);

/// Length-lexicographic comparison.
bool shortlex_less(const Word& a, const Word& b);

}  // namespace ucfg
