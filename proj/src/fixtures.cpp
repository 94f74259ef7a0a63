#include "ucfg/fixtures.hpp"

namespace ucfg::fixtures {

namespace {

Alphabet ab() { return Alphabet({"a", "b"}); }

}  // namespace

ShortGnfGrammar universal_grammar() {
  GnfBuilder b(ab(), "S");
  int s = b.nonterminal("S"), e = b.nonterminal("E");
  b.epsilon(s);
  b.rule(s, 0, e, s);
  b.rule(s, 1, e, s);
  b.epsilon(e);
  return b.build();
}

ShortGnfGrammar a_only_grammar() {
  GnfBuilder b(ab(), "S");
  int s = b.nonterminal("S"), e = b.nonterminal("E");
  b.epsilon(s);
  b.rule(s, 0, e, s);
  b.epsilon(e);
  return b.build();
}

ShortGnfGrammar y2_grammar() {
  GnfBuilder b(Alphabet({"a"}), "S");
  int s = b.nonterminal("S"), t = b.nonterminal("T"), u = b.nonterminal("U"), v = b.nonterminal("V");
  int e = b.nonterminal("E");
  b.epsilon(s);
  b.rule(s, 0, t, e);
  b.epsilon(t);
  b.rule(t, 0, u, e);
  b.epsilon(u);
  b.rule(u, 0, v, e);
  b.epsilon(v);
  b.epsilon(e);
  return b.build();
}

ShortGnfGrammar ambiguous_grammar() {
  GnfBuilder b(Alphabet({"a"}), "S");
  int s = b.nonterminal("S"), e = b.nonterminal("E"), f = b.nonterminal("F");
  b.rule(s, 0, e, e);
  b.rule(s, 0, f, f);
  b.epsilon(e);
  b.epsilon(f);
  return b.build();
}

ShortGnfGrammar dyck_grammar() {
  GnfBuilder b(ab(), "S");
  int s = b.nonterminal("S"), t = b.nonterminal("T"), e = b.nonterminal("E");
  b.epsilon(s);
  b.rule(s, 0, s, t);
  b.rule(t, 1, e, s);
  b.epsilon(e);
  return b.build();
}

ShortGnfGrammar even_length_grammar() {
  GnfBuilder b(ab(), "S");
  int s = b.nonterminal("S"), o = b.nonterminal("O"), e = b.nonterminal("E");
  b.epsilon(s);
  b.rule(s, 0, o, e);
  b.rule(s, 1, o, e);
  b.rule(o, 0, s, e);
  b.rule(o, 1, s, e);
  b.epsilon(e);
  return b.build();
}

std::vector<NamedGrammar> all_grammars() {
  return {
      {"universal", universal_grammar(), true},
      {"a-only", a_only_grammar(), true},
      {"y2", y2_grammar(), true},
      {"ambiguous", ambiguous_grammar(), false},
      {"dyck", dyck_grammar(), true},
      {"even-length", even_length_grammar(), true},
      {"family-y3", exponential_witness_family(3), true},
      {"family-x2", exponential_witness_family(2, true), true},
  };
}

FiniteAutomaton a_star_dfa() {
  FiniteAutomaton m(ab());
  int q = m.add_state("q", true);
  m.add_transition(q, 0, q);
  return m;
}

FiniteAutomaton sigma_star_dfa() {
  FiniteAutomaton m(ab());
  int q = m.add_state("q", true);
  m.add_transition(q, 0, q);
  m.add_transition(q, 1, q);
  return m;
}

FiniteAutomaton even_length_dfa() {
  FiniteAutomaton m(ab());
  int even = m.add_state("even", true), odd = m.add_state("odd");
  for (Letter a : {0, 1}) {
    m.add_transition(even, a, odd);
    m.add_transition(odd, a, even);
  }
  return m;
}

FiniteAutomaton even_odd_ufa() {
  FiniteAutomaton m(ab());
  int s = m.add_state("s", true);
  int e0 = m.add_state("E0", true), e1 = m.add_state("E1");
  int o0 = m.add_state("O0"), o1 = m.add_state("O1", true);
  // E* states: the whole word has even length; O*: odd. The digit is the
  // parity of the letters read so far.
  for (Letter a : {0, 1}) {
    m.add_transition(s, a, e1);
    m.add_transition(s, a, o1);
    m.add_transition(e1, a, e0);
    m.add_transition(e0, a, e1);
    m.add_transition(o1, a, o0);
    m.add_transition(o0, a, o1);
  }
  return m;
}

ShortGnfGrammar exponential_witness_family(int n, bool x_start) {
  GnfBuilder b(Alphabet({"a"}), x_start ? "X" + std::to_string(n) : "Y" + std::to_string(n));
  int e = b.nonterminal("E");
  b.epsilon(e);
  std::vector<int> z;
  for (int k = 0; k <= n; ++k) z.push_back(b.nonterminal("Z" + std::to_string(k)));
  b.epsilon(z[0]);
  for (int k = 0; k < n; ++k) b.rule(z[k + 1], 0, z[k], z[k]);
  if (x_start) {
    b.rule(b.nonterminal("X" + std::to_string(n)), 0, z[n], e);
    return b.build();
  }
  std::vector<int> y;
  for (int k = 0; k <= n; ++k) y.push_back(b.nonterminal("Y" + std::to_string(k)));
  // Y_{k+1} repeats every rule of Y_k, so all rules collect at each level.
  for (int k = 0; k <= n; ++k) {
    b.epsilon(y[k]);
    for (int j = 0; j < k; ++j) b.rule(y[k], 0, z[j], y[j]);
  }
  return b.build();
}

}  // namespace ucfg::fixtures
