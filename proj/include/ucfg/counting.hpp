#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ucfg/automaton.hpp"
#include "ucfg/convrec.hpp"
#include "ucfg/grammar.hpp"
#include "ucfg/oracle.hpp"

namespace ucfg {

struct UniversalityVerdict {
  enum class Kind { NotUniversal, UniversalUpTo, Universal };
  Kind kind = Kind::UniversalUpTo;
  std::optional<int> witness_length;  // least n with f(n) < |Σ|^n
  std::optional<Word> witness;        // first missing word of that length
  std::optional<int> bound;           // set for UniversalUpTo
};

const char* kind_name(UniversalityVerdict::Kind kind);

inline constexpr int kDefaultUniversalityBound = 512;

/// Accepted words per length 0..N of an unambiguous automaton, obtained as
/// accepting-run counts. Throws AmbiguityDetected (with the first ambiguous
/// word) when the trimmed automaton is ambiguous.
WordCountTable ufa_counts(const FiniteAutomaton& m, int N);

/// Complete universality test for unambiguous automata. With s states after
/// trimming, the run counts satisfy a linear recurrence of order <= s, so
/// |Σ|^n - f(n) satisfies one of order <= s+1 and vanishes everywhere iff it
/// vanishes for n = 0..s.
UniversalityVerdict ufa_universal(const FiniteAutomaton& m);

/// One component per nonterminal X:  sigma f_X = sum over X <- aYZ of f_Y * f_Z,
/// f_X(0) = 1 iff X <- eps. For ambiguous grammars it counts derivation trees.
ConvRecSystem ucfg_counting_system(const ShortGnfGrammar& g);

/// |Σ|^n - f_S(n) as a conv-rec system (geometric sequence via sigma h = |Σ| h).
ConvRecSystem universality_difference_system(const ShortGnfGrammar& g);

/// Bounded universality check up to length N. Never answers Universal; a word
/// count above |Σ|^n raises AmbiguityDetected. The witness word is searched
/// for within `witness_budget` configurations; when that fails only the
/// length is reported.
UniversalityVerdict ucfg_universal(const ShortGnfGrammar& g, int N = kDefaultUniversalityBound,
                                   std::uint64_t witness_budget = kDefaultOracleBudget);

/// Length-lexicographically first word of length n outside L(g). The search
/// descends letter by letter, using derivation counts of the leftmost
/// sentential forms to pick the first prefix that still misses a word; the
/// result is confirmed with the chart recognizer. Requires unambiguity and
/// f_S(n) < |Σ|^n (precondition error otherwise).
Word shortest_missing_word(const ShortGnfGrammar& g, int n, std::uint64_t budget = kDefaultOracleBudget);

/// The same for unambiguous automata, guided by run counts.
Word shortest_missing_word(const FiniteAutomaton& m, int n);

}  // namespace ucfg
