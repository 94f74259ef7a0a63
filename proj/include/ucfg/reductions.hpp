#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucfg/automaton.hpp"
#include "ucfg/counting.hpp"
#include "ucfg/grammar.hpp"

namespace ucfg {

/// New letters are transitions "p.a.q" of the left-hand machine; h maps each
/// back to its original letter.
struct TransitionAlphabetMap {
  Alphabet original;
  Alphabet lifted;
  std::vector<Letter> h;                    // lifted letter -> original letter
  std::vector<std::vector<Letter>> preimage;  // original letter -> lifted letters

  Word project(const Word& w) const;
};

struct LhsDeterminized {
  FiniteAutomaton automaton;  // deterministic, over map.lifted
  TransitionAlphabetMap map;
};

/// Totalizes `a`, then relabels every transition with its own letter. The
/// result is deterministic and h(L(a')) = L(a).
LhsDeterminized lhs_determinize(const FiniteAutomaton& a);

/// h^-1(L(b)): every transition on x is copied for each lifted letter over x.
/// Preserves determinism and unambiguity.
FiniteAutomaton lift_automaton(const FiniteAutomaton& b, const TransitionAlphabetMap& map);
/// h^-1(L(g)), rule by rule; preserves unambiguity.
ShortGnfGrammar lift_grammar(const ShortGnfGrammar& g, const TransitionAlphabetMap& map);

/// Triple construction: nonterminals [p,X,q]; only nonterminals reachable
/// from the start are generated and the result is trimmed. L = L(g) ∩ L(d).
/// Requires d deterministic and total, so unambiguity carries over.
ShortGnfGrammar ucfg_dfa_product(const ShortGnfGrammar& g, const FiniteAutomaton& d);

/// Right-linear grammar: Q <- a Q' E for each transition, Q <- eps when Q
/// accepts. Derivations correspond to accepting runs.
ShortGnfGrammar automaton_to_grammar(const FiniteAutomaton& d);

/// Fresh start with the start rules of both g and the grammar of d. When
/// `check_disjoint` is set the intersection is computed exactly and a common
/// word is reported as a precondition error.
ShortGnfGrammar union_ucfg_dfa(const ShortGnfGrammar& g, const FiniteAutomaton& d, bool check_disjoint = true);

/// A shortest word of L(g), if the language is non-empty.
std::optional<Word> some_shortest_word(const ShortGnfGrammar& g);

struct InclusionResult {
  enum class Kind { Included, NotIncluded, IncludedUpTo };
  Kind kind = Kind::IncludedUpTo;
  std::optional<Word> witness;        // over the original alphabet
  std::optional<int> witness_length;
  std::optional<int> bound;           // IncludedUpTo only
  // Intermediate artifacts, for inspection and --dump-dir.
  std::optional<FiniteAutomaton> lhs_lifted;       // a'
  std::optional<FiniteAutomaton> rhs_lifted;       // b' (automaton pipeline)
  std::optional<ShortGnfGrammar> rhs_lifted_grammar;
  std::optional<FiniteAutomaton> union_automaton;  // N (automaton pipeline)
  std::optional<ShortGnfGrammar> product_grammar;
  std::optional<ShortGnfGrammar> union_grammar;
  std::optional<FiniteAutomaton> complement;
};

const char* kind_name(InclusionResult::Kind kind);

/// L(a) ⊆ L(b) for an NFA a and an unambiguous automaton b; complete.
InclusionResult include_nfa_ufa(const FiniteAutomaton& a, const FiniteAutomaton& b);

/// L(a) ⊆ L(g) for an NFA a and an unambiguous grammar g, falsified up to
/// words of length N. Never answers Included. `lint_len` bounds the
/// unambiguity lint run on g first.
InclusionResult include_nfa_ucfg(const FiniteAutomaton& a, const ShortGnfGrammar& g,
                                 int N = kDefaultUniversalityBound, int lint_len = 6);

/// Difference system of the union grammar built by include_nfa_ucfg; feed it
/// to emit_reals_sentence for an external certificate of inclusion.
ConvRecSystem inclusion_difference_system(const InclusionResult& r);

}  // namespace ucfg
