#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ucfg/alphabet.hpp"

namespace ucfg {

struct Symbol {
  bool terminal = false;
  int index = 0;

  static Symbol letter(Letter a) { return {true, a}; }
  static Symbol nonterminal(int x) { return {false, x}; }

  auto operator<=>(const Symbol&) const = default;
};

struct Production {
  int lhs = 0;
  std::vector<Symbol> rhs;  // empty rhs is an epsilon production

  bool operator==(const Production&) const = default;
};

/// A context-free grammar. Nonterminals are indexed; the start symbol is
/// always index 0. Duplicate productions are rejected on insertion.
class Grammar {
 public:
  Grammar(Alphabet alphabet, const std::string& start_name);

  const Alphabet& alphabet() const { return alphabet_; }
  int start() const { return 0; }

  int nonterminal_count() const { return static_cast<int>(names_.size()); }
  const std::string& nonterminal_name(int x) const { return names_.at(x); }
  const std::vector<std::string>& nonterminal_names() const { return names_; }
  std::optional<int> find_nonterminal(std::string_view name) const;

  /// Adds a new nonterminal; throws if the name clashes with a letter or an
  /// existing nonterminal.
  int add_nonterminal(const std::string& name);
  /// Returns the existing index or adds the nonterminal.
  int ensure_nonterminal(const std::string& name);
  /// `stem`, `stem'`, `stem''`, ... whichever is free first.
  std::string fresh_name(const std::string& stem) const;

  const std::vector<Production>& productions() const { return productions_; }
  void add_production(int lhs, std::vector<Symbol> rhs);
  bool has_production(int lhs, const std::vector<Symbol>& rhs) const;

  std::string symbol_name(const Symbol& s) const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Production> productions_;
  std::set<std::pair<int, std::vector<Symbol>>> seen_;
};

/// Structural equality (alphabet, nonterminal names and order, production
/// list and order).
bool operator==(const Grammar& a, const Grammar& b);

/// Line format:
///   alphabet a b
///   start S
///   nonterminals S E        (optional; fixes the nonterminal order)
///   S -> a E S
///   E ->                    (empty right-hand side is epsilon)
/// `#` starts a comment. Tokens that are declared letters are terminals,
/// every other right-hand-side token is a nonterminal.
Grammar parse_grammar(std::string_view text);
std::string serialize(const Grammar& g);

/// X <- aYZ in short Greibach normal form.
struct GnfRule {
  int lhs = 0;
  Letter letter = 0;
  int first = 0;
  int second = 0;

  auto operator<=>(const GnfRule&) const = default;
};

/// A grammar whose productions are all X <- eps or X <- aYZ. Only obtainable
/// through validate_short_gnf() (or helpers built on it), so the shape is
/// guaranteed.
class ShortGnfGrammar {
 public:
  const Grammar& grammar() const { return grammar_; }
  const Alphabet& alphabet() const { return grammar_.alphabet(); }
  int start() const { return 0; }
  int nonterminal_count() const { return grammar_.nonterminal_count(); }
  const std::string& name(int x) const { return grammar_.nonterminal_name(x); }

  bool has_epsilon(int x) const { return epsilon_.at(x) != 0; }
  const std::vector<GnfRule>& rules() const { return rules_; }
  /// Indices into rules() with the given left-hand side.
  const std::vector<int>& rules_of(int x) const { return by_lhs_.at(x); }

 private:
  friend ShortGnfGrammar validate_short_gnf(const Grammar& g);
  explicit ShortGnfGrammar(Grammar g) : grammar_(std::move(g)) {}

  Grammar grammar_;
  std::vector<char> epsilon_;
  std::vector<GnfRule> rules_;
  std::vector<std::vector<int>> by_lhs_;
};

inline bool operator==(const ShortGnfGrammar& a, const ShortGnfGrammar& b) {
  return a.grammar() == b.grammar();
}

/// Throws lang.validation listing every production that is neither
/// epsilon-shaped nor aYZ-shaped.
ShortGnfGrammar validate_short_gnf(const Grammar& g);

/// Normalizes grammars whose productions are epsilon or a.N1...Nj (one leading
/// terminal, then only nonterminals) into short GNF while keeping a bijection
/// between derivation trees. Inputs already in short GNF come back unchanged.
ShortGnfGrammar binarize_prefixed(const Grammar& g);

/// Removes nonterminals that are unproductive or unreachable from the start
/// symbol (the start symbol itself is always kept). Language and derivation
/// counts are unchanged.
ShortGnfGrammar trim(const ShortGnfGrammar& g);

/// Convenience for constructions that emit short-GNF grammars directly.
class GnfBuilder {
 public:
  GnfBuilder(Alphabet alphabet, const std::string& start_name)
      : grammar_(std::move(alphabet), start_name) {}

  int nonterminal(const std::string& name) { return grammar_.ensure_nonterminal(name); }
  int fresh(const std::string& stem) { return grammar_.add_nonterminal(grammar_.fresh_name(stem)); }
  void epsilon(int x) { grammar_.add_production(x, {}); }
  void rule(int x, Letter a, int y, int z) {
    grammar_.add_production(x, {Symbol::letter(a), Symbol::nonterminal(y), Symbol::nonterminal(z)});
  }
  /// Adds the production unless it is already present.
  void rule_once(int x, Letter a, int y, int z);
  void epsilon_once(int x);

  Grammar& grammar() { return grammar_; }
  ShortGnfGrammar build() const { return validate_short_gnf(grammar_); }

 private:
  Grammar grammar_;
};

}  // namespace ucfg
