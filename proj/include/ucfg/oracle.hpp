#pragma once

// Brute-force ground truth. Everything here enumerates words explicitly and
// is meant for small lengths; the budgets keep accidental blow-ups bounded.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ucfg/automaton.hpp"
#include "ucfg/grammar.hpp"
#include "ucfg/rational.hpp"
#include "ucfg/regex.hpp"

namespace ucfg {

/// words[l] holds the accepted words of length l in lexicographic order.
using WordsByLength = std::vector<std::vector<Word>>;

/// Upper limit on the number of candidate words (or chart cells) examined.
inline constexpr std::uint64_t kDefaultOracleBudget = 4'000'000;

/// Grammar membership uses a chart recognizer on every word of length <= max_len.
WordsByLength enumerate_words(const Grammar& g, int max_len, std::uint64_t budget = kDefaultOracleBudget);
WordsByLength enumerate_words(const FiniteAutomaton& m, int max_len, std::uint64_t budget = kDefaultOracleBudget);
/// Set semantics computed bottom-up on the tree, independent of regex_to_nfa.
WordsByLength enumerate_words(const Regex& e, int max_len, std::uint64_t budget = kDefaultOracleBudget);

bool recognizes(const Grammar& g, const Word& w);

/// Number of derivation trees of `w`. Throws lang.validation when the number
/// is infinite (a cyclic derivation that can pump inside one span).
Integer count_derivations(const Grammar& g, const Word& w);

struct AmbiguityVerdict {
  bool ambiguous = false;
  int bound = 0;            // lengths 0..bound were examined
  std::optional<Word> witness;  // shortest, then lexicographically first
};

/// Bounded lint: a clean result is evidence up to `max_len`, never a proof.
AmbiguityVerdict check_unambiguous_up_to(const Grammar& g, int max_len,
                                         std::uint64_t budget = kDefaultOracleBudget);
/// Same verdict for short-GNF grammars, computed from per-nonterminal word
/// multiplicity tables instead of parsing each word.
AmbiguityVerdict check_unambiguous_up_to(const ShortGnfGrammar& g, int max_len,
                                         std::uint64_t budget = kDefaultOracleBudget);

/// counts[l]: distinct accepted words of length l, or accepting runs /
/// derivations of length l when `multiplicity` is set.
struct WordCountTable {
  std::vector<Integer> counts;
  bool multiplicity = false;
};

WordCountTable word_counts(const WordsByLength& words);

/// Words of Σ^l in lexicographic order, l = 0..max_len.
std::uint64_t words_up_to(int alphabet_size, int max_len);

}  // namespace ucfg
