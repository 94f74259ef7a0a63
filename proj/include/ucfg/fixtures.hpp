#pragma once

// Small named languages used throughout the tests, the acceptance suite and
// the CLI examples. The same objects are shipped as text under fixtures/.

#include <string>
#include <vector>

#include "ucfg/automaton.hpp"
#include "ucfg/grammar.hpp"

namespace ucfg::fixtures {

/// S <- eps | a E S | b E S, E <- eps: all of {a,b}*.
ShortGnfGrammar universal_grammar();
/// S <- eps | a E S over {a,b}: exactly a*.
ShortGnfGrammar a_only_grammar();
/// {eps, a, aa, aaa} over {a}.
ShortGnfGrammar y2_grammar();
/// S <- a E E | a F F: the word "a" has two derivations.
ShortGnfGrammar ambiguous_grammar();
/// Balanced brackets over {a,b}: S <- eps | a S T, T <- b E S.
ShortGnfGrammar dyck_grammar();
/// Even-length words over {a,b}.
ShortGnfGrammar even_length_grammar();

struct NamedGrammar {
  std::string name;
  ShortGnfGrammar grammar;
  bool unambiguous;
};
std::vector<NamedGrammar> all_grammars();

/// Deterministic automaton for a* over {a,b} (partial: no b-transition).
FiniteAutomaton a_star_dfa();
/// One-state total automaton for {a,b}*.
FiniteAutomaton sigma_star_dfa();
/// Total automaton for even-length words over {a,b}.
FiniteAutomaton even_length_dfa();
/// Universal automaton over {a,b} that guesses the parity of the length at
/// the first letter: nondeterministic, yet every word has exactly one
/// accepting run. States s, E0, E1, O0, O1.
FiniteAutomaton even_odd_ufa();

/// Unary family with exponentially long non-universality witnesses:
/// Z_0 <- eps, Z_{k+1} <- a Z_k Z_k (so Z_k derives a^(2^k - 1)),
/// X_k <- a Z_k E (the single word a^(2^k)),
/// Y_0 <- eps, Y_{k+1} <- Y_k's rules | a Z_k Y_k (all words shorter than 2^k).
/// The start symbol is Y_n, or X_n when `x_start` is set.
ShortGnfGrammar exponential_witness_family(int n, bool x_start = false);

}  // namespace ucfg::fixtures
