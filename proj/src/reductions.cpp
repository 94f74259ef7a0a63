#include "ucfg/reductions.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "ucfg/error.hpp"
#include "ucfg/oracle.hpp"

namespace ucfg {

const char* kind_name(InclusionResult::Kind kind) {
  switch (kind) {
    case InclusionResult::Kind::Included: return "Included";
    case InclusionResult::Kind::NotIncluded: return "NotIncluded";
    case InclusionResult::Kind::IncludedUpTo: return "IncludedUpTo";
  }
  return "?";
}

Word TransitionAlphabetMap::project(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (Letter a : w) out.push_back(h.at(a));
  return out;
}

LhsDeterminized lhs_determinize(const FiniteAutomaton& a) {
  FiniteAutomaton t = totalize(a);
  std::vector<std::string> names;
  std::set<std::string> used;
  std::vector<Letter> h;
  for (const Transition& tr : t.transitions()) {
    std::string name = t.state_name(tr.source) + "." + t.alphabet().letter(tr.letter) + "." + t.state_name(tr.target);
    while (!used.insert(name).second) name += '\'';
    names.push_back(name);
    h.push_back(tr.letter);
  }
  Alphabet lifted(names);
  FiniteAutomaton out(lifted);
  for (int q = 0; q < t.state_count(); ++q) out.add_state(t.state_name(q), t.accepting(q));
  out.set_initial(t.initial());
  for (size_t i = 0; i < t.transitions().size(); ++i) {
    const Transition& tr = t.transitions()[i];
    out.add_transition(tr.source, static_cast<Letter>(i), tr.target);
  }
  TransitionAlphabetMap map{a.alphabet(), lifted, h, std::vector<std::vector<Letter>>(a.alphabet().size())};
  for (size_t i = 0; i < h.size(); ++i) map.preimage[h[i]].push_back(static_cast<Letter>(i));
  return {std::move(out), std::move(map)};
}

FiniteAutomaton lift_automaton(const FiniteAutomaton& b, const TransitionAlphabetMap& map) {
  if (!(b.alphabet() == map.original))
    throw Error(Errc::Precondition, "reductions", "automaton alphabet differs from the map's original alphabet");
  FiniteAutomaton out(map.lifted);
  for (int q = 0; q < b.state_count(); ++q) out.add_state(b.state_name(q), b.accepting(q));
  out.set_initial(b.initial());
  for (const Transition& tr : b.transitions())
    for (Letter d : map.preimage[tr.letter]) out.add_transition(tr.source, d, tr.target);
  return out;
}

ShortGnfGrammar lift_grammar(const ShortGnfGrammar& g, const TransitionAlphabetMap& map) {
  if (!(g.alphabet() == map.original))
    throw Error(Errc::Precondition, "reductions", "grammar alphabet differs from the map's original alphabet");
  GnfBuilder b(map.lifted, g.name(0));
  for (int x = 1; x < g.nonterminal_count(); ++x) b.nonterminal(g.name(x));
  for (const Production& p : g.grammar().productions()) {
    if (p.rhs.empty()) {
      b.epsilon(p.lhs);
      continue;
    }
    for (Letter d : map.preimage[p.rhs[0].index]) b.rule(p.lhs, d, p.rhs[1].index, p.rhs[2].index);
  }
  return b.build();
}

namespace {

// Triple construction for any automaton (unambiguity needs determinism).
ShortGnfGrammar triple_product(const ShortGnfGrammar& g, const FiniteAutomaton& d) {
  if (!(g.alphabet() == d.alphabet()))
    throw Error(Errc::Precondition, "reductions", "grammar and automaton alphabets differ");
  const int s = d.state_count();
  std::vector<std::vector<std::vector<int>>> delta(s, std::vector<std::vector<int>>(d.alphabet().size()));
  for (const Transition& t : d.transitions()) delta[t.source][t.letter].push_back(t.target);

  using Triple = std::tuple<int, int, int>;
  GnfBuilder b(g.alphabet(), g.name(0));
  const int start = 0;
  std::map<Triple, int> ids;
  std::deque<Triple> queue;
  auto id_of = [&](int p, int x, int q) {
    Triple key{p, x, q};
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = b.nonterminal("[" + d.state_name(p) + "," + g.name(x) + "," + d.state_name(q) + "]");
    ids.emplace(key, id);
    queue.push_back(key);
    return id;
  };
  struct Body {
    bool epsilon;
    Letter a;
    int y, z;
  };
  std::map<int, std::vector<Body>> bodies;
  std::vector<int> roots;
  for (int qf = 0; qf < s; ++qf)
    if (d.accepting(qf)) roots.push_back(id_of(d.initial(), g.start(), qf));
  while (!queue.empty()) {
    auto [p, x, r] = queue.front();
    queue.pop_front();
    int self = ids.at({p, x, r});
    auto& out = bodies[self];
    if (g.has_epsilon(x) && p == r) out.push_back({true, 0, 0, 0});
    for (int ri : g.rules_of(x)) {
      const GnfRule& rule = g.rules()[ri];
      for (int p2 : delta[p][rule.letter])
        for (int q = 0; q < s; ++q) out.push_back({false, rule.letter, id_of(p2, rule.first, q), id_of(q, rule.second, r)});
    }
  }
  auto emit = [&](int lhs, const Body& body) {
    if (body.epsilon) b.epsilon_once(lhs);
    else b.rule_once(lhs, body.a, body.y, body.z);
  };
  for (int root : roots)
    for (const Body& body : bodies[root]) emit(start, body);
  for (const auto& [id, list] : bodies)
    for (const Body& body : list) emit(id, body);
  return trim(b.build());
}

}  // namespace

ShortGnfGrammar ucfg_dfa_product(const ShortGnfGrammar& g, const FiniteAutomaton& d) {
  if (auto bad = find_nondeterminism(d))
    throw Error(Errc::Precondition, "reductions",
                "product needs a deterministic automaton; state " + d.state_name(bad->first) +
                    " has two transitions on " + d.alphabet().letter(bad->second));
  if (!is_total(d)) throw Error(Errc::Precondition, "reductions", "product needs a total automaton");
  return triple_product(g, d);
}

ShortGnfGrammar automaton_to_grammar(const FiniteAutomaton& d) {
  GnfBuilder b(d.alphabet(), "@" + d.state_name(d.initial()));
  std::vector<int> ids(d.state_count());
  ids[d.initial()] = 0;
  for (int q = 0; q < d.state_count(); ++q)
    if (q != d.initial()) ids[q] = b.nonterminal("@" + d.state_name(q));
  int e = -1;
  for (int q = 0; q < d.state_count(); ++q) {
    if (d.accepting(q)) b.epsilon(ids[q]);
    for (auto [a, r] : d.out(q)) {
      if (e < 0) {
        e = b.fresh("E");
        b.epsilon(e);
      }
      b.rule(ids[q], a, ids[r], e);
    }
  }
  return b.build();
}

std::optional<Word> some_shortest_word(const ShortGnfGrammar& g) {
  const int k = g.nonterminal_count();
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<long> len(k, inf);
  for (int x = 0; x < k; ++x)
    if (g.has_epsilon(x)) len[x] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const GnfRule& r : g.rules()) {
      if (len[r.first] >= inf || len[r.second] >= inf) continue;
      long l = 1 + len[r.first] + len[r.second];
      if (l < len[r.lhs]) {
        len[r.lhs] = l;
        changed = true;
      }
    }
  }
  if (len[g.start()] >= inf) return std::nullopt;
  Word w;
  auto build = [&](auto&& self, int x) -> void {
    if (len[x] == 0) return;
    const GnfRule* best = nullptr;
    for (int ri : g.rules_of(x)) {
      const GnfRule& r = g.rules()[ri];
      if (len[r.first] >= inf || len[r.second] >= inf || 1 + len[r.first] + len[r.second] != len[x]) continue;
      if (!best || r.letter < best->letter) best = &r;
    }
    w.push_back(best->letter);
    self(self, best->first);
    self(self, best->second);
  };
  build(build, g.start());
  return w;
}

ShortGnfGrammar union_ucfg_dfa(const ShortGnfGrammar& g, const FiniteAutomaton& d, bool check_disjoint) {
  if (!(g.alphabet() == d.alphabet()))
    throw Error(Errc::Precondition, "reductions", "grammar and automaton alphabets differ");
  if (check_disjoint) {
    if (auto w = some_shortest_word(triple_product(g, d)))
      throw Error(Errc::Precondition, "reductions",
                  "languages overlap; both contain '" + g.alphabet().render(*w) + "'");
  }
  ShortGnfGrammar r = automaton_to_grammar(d);
  std::set<std::string> taken(g.grammar().nonterminal_names().begin(), g.grammar().nonterminal_names().end());
  taken.insert(r.grammar().nonterminal_names().begin(), r.grammar().nonterminal_names().end());
  std::string start = "U";
  while (taken.count(start) || g.alphabet().contains(start)) start += '\'';
  GnfBuilder b(g.alphabet(), start);
  std::vector<int> from_g(g.nonterminal_count()), from_r(r.nonterminal_count());
  for (int x = 0; x < g.nonterminal_count(); ++x) from_g[x] = b.nonterminal(g.name(x));
  for (int x = 0; x < r.nonterminal_count(); ++x) {
    std::string name = r.name(x);
    while (std::count(g.grammar().nonterminal_names().begin(), g.grammar().nonterminal_names().end(), name)) name += '\'';
    from_r[x] = b.nonterminal(name);
  }
  auto copy = [&](const ShortGnfGrammar& src, const std::vector<int>& ids) {
    for (int x = 0; x < src.nonterminal_count(); ++x) {
      if (src.has_epsilon(x)) b.epsilon(ids[x]);
      for (int ri : src.rules_of(x)) {
        const GnfRule& rule = src.rules()[ri];
        b.rule(ids[x], rule.letter, ids[rule.first], ids[rule.second]);
      }
    }
  };
  copy(g, from_g);
  copy(r, from_r);
  if (g.has_epsilon(g.start()) || r.has_epsilon(r.start())) b.epsilon_once(0);
  auto start_rules = [&](const ShortGnfGrammar& src, const std::vector<int>& ids) {
    for (int ri : src.rules_of(src.start())) {
      const GnfRule& rule = src.rules()[ri];
      b.rule_once(0, rule.letter, ids[rule.first], ids[rule.second]);
    }
  };
  start_rules(g, from_g);
  start_rules(r, from_r);
  return b.build();
}

namespace {

void lint_automaton(const FiniteAutomaton& b) {
  if (auto w = find_ambiguous_word(trim(b)))
    throw AmbiguityDetected("reductions",
                            "right-hand automaton is ambiguous on '" + b.alphabet().render(*w) + "'",
                            static_cast<int>(w->size()));
}

}  // namespace

InclusionResult include_nfa_ufa(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (!(a.alphabet() == b.alphabet())) throw Error(Errc::Precondition, "reductions", "alphabets differ");
  lint_automaton(b);
  LhsDeterminized det = lhs_determinize(a);
  FiniteAutomaton lifted = lift_automaton(b, det.map);
  FiniteAutomaton comp = complement_dfa(det.automaton);
  FiniteAutomaton n = disjoint_union(product(lifted, det.automaton), comp);
  UniversalityVerdict v = ufa_universal(n);
  InclusionResult r;
  r.lhs_lifted = det.automaton;
  r.rhs_lifted = lifted;
  r.complement = comp;
  r.union_automaton = n;
  if (v.kind == UniversalityVerdict::Kind::Universal) {
    r.kind = InclusionResult::Kind::Included;
  } else {
    r.kind = InclusionResult::Kind::NotIncluded;
    r.witness_length = v.witness_length;
    if (v.witness) r.witness = det.map.project(*v.witness);
  }
  return r;
}

InclusionResult include_nfa_ucfg(const FiniteAutomaton& a, const ShortGnfGrammar& g, int N, int lint_len) {
  if (!(a.alphabet() == g.alphabet())) throw Error(Errc::Precondition, "reductions", "alphabets differ");
  int len = lint_len;
  while (len > 0 && words_up_to(g.alphabet().size(), len) > 200000) --len;
  AmbiguityVerdict lint = check_unambiguous_up_to(g, len);
  if (lint.ambiguous)
    throw AmbiguityDetected("reductions", "grammar is ambiguous on '" + g.alphabet().render(*lint.witness) + "'",
                            static_cast<int>(lint.witness->size()));
  LhsDeterminized det = lhs_determinize(a);
  ShortGnfGrammar lifted = lift_grammar(g, det.map);
  ShortGnfGrammar prod = ucfg_dfa_product(lifted, totalize(det.automaton));
  FiniteAutomaton comp = complement_dfa(det.automaton);
  ShortGnfGrammar uni = union_ucfg_dfa(prod, comp, false);
  UniversalityVerdict v = ucfg_universal(uni, N);
  InclusionResult r;
  r.lhs_lifted = det.automaton;
  r.rhs_lifted_grammar = lifted;
  r.product_grammar = prod;
  r.complement = comp;
  r.union_grammar = uni;
  if (v.kind == UniversalityVerdict::Kind::NotUniversal) {
    r.kind = InclusionResult::Kind::NotIncluded;
    r.witness_length = v.witness_length;
    if (v.witness) r.witness = det.map.project(*v.witness);
  } else {
    r.kind = InclusionResult::Kind::IncludedUpTo;
    r.bound = N;
  }
  return r;
}

ConvRecSystem inclusion_difference_system(const InclusionResult& r) {
  if (!r.union_grammar) throw Error(Errc::Precondition, "reductions", "no union grammar in this result");
  return universality_difference_system(*r.union_grammar);
}

}  // namespace ucfg
