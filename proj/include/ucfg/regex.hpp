#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucfg/alphabet.hpp"
#include "ucfg/automaton.hpp"

namespace ucfg {

/// Immutable regular expression tree. Union and Concat nodes always have at
/// least two children; alt() and seq() collapse the degenerate cases.
class Regex {
 public:
  enum class Kind { Empty, Eps, Letter, Union, Concat, Star };

  static Regex empty();
  static Regex eps();
  static Regex letter(Letter a);
  static Regex alt(std::vector<Regex> children);
  static Regex seq(std::vector<Regex> children);
  static Regex star(Regex child);

  Kind kind() const { return node_->kind; }
  Letter letter() const { return node_->letter; }
  const std::vector<Regex>& children() const { return node_->children; }
  const Regex& child() const { return node_->children.at(0); }

  /// Number of tree nodes.
  long size() const { return node_->size; }

  friend bool operator==(const Regex& a, const Regex& b);

 private:
  struct Node {
    Kind kind = Kind::Empty;
    Letter letter = 0;
    std::vector<Regex> children;
    long size = 1;
  };
  explicit Regex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// A regex together with the alphabet it lives in. The alphabet matters for
/// measures, where letters outside the expression still count.
struct RegexFile {
  Alphabet alphabet;
  Regex regex;
};

/// `|` union, juxtaposition concatenation, postfix `*`, parentheses, and the
/// keywords `eps` and `empty`. Letter tokens are separated by whitespace or
/// operators; an unknown token made of single-character letters is split.
Regex parse_regex(std::string_view text, const Alphabet& alphabet);
std::string to_text(const Regex& e, const Alphabet& alphabet);

/// File form: an optional `alphabet ...` line, then the expression (possibly
/// over several lines). Without the header, the alphabet is the tokens in
/// order of first appearance.
RegexFile parse_regex_file(std::string_view text);
std::string serialize(const RegexFile& file);

bool nullable(const Regex& e);
/// Largest letter index used plus one (0 when no letters occur).
int letter_bound(const Regex& e);

/// Position (Glushkov) automaton. The number of accepting runs on w equals the
/// number of ways e matches w. Stars over nullable subexpressions are rejected;
/// an expression whose empty-word matches would need a multiplicity above one
/// (e.g. (eps|eps)) raises AmbiguityDetected since runs cannot represent it.
FiniteAutomaton regex_to_nfa(const Regex& e, const Alphabet& alphabet);

}  // namespace ucfg
