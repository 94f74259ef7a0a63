#include "ucfg/counting.hpp"

#include <algorithm>
#include <map>

#include "ucfg/error.hpp"

namespace ucfg {

const char* kind_name(UniversalityVerdict::Kind kind) {
  switch (kind) {
    case UniversalityVerdict::Kind::NotUniversal: return "NotUniversal";
    case UniversalityVerdict::Kind::UniversalUpTo: return "UniversalUpTo";
    case UniversalityVerdict::Kind::Universal: return "Universal";
  }
  return "?";
}

namespace {

FiniteAutomaton linted(const FiniteAutomaton& m) {
  FiniteAutomaton t = trim(m);
  if (auto w = find_ambiguous_word(t))
    throw AmbiguityDetected("counting", "automaton is ambiguous: '" + t.alphabet().render(*w) + "' has two accepting runs",
                            static_cast<int>(w->size()));
  return t;
}

}  // namespace

WordCountTable ufa_counts(const FiniteAutomaton& m, int N) {
  FiniteAutomaton t = linted(m);
  return {count_runs(t, N), false};
}

Word shortest_missing_word(const FiniteAutomaton& m, int n) {
  FiniteAutomaton t = linted(m);
  const int s = t.state_count(), k = t.alphabet().size();
  // acc[r][q]: accepting runs of length r starting in q
  std::vector<std::vector<Integer>> acc(n + 1, std::vector<Integer>(s, 0));
  for (int q = 0; q < s; ++q) acc[0][q] = t.accepting(q) ? 1 : 0;
  for (int r = 1; r <= n; ++r)
    for (const Transition& tr : t.transitions()) acc[r][tr.source] += acc[r - 1][tr.target];
  std::vector<Integer> runs(s, 0);
  runs[t.initial()] = 1;
  Word w;
  for (int pos = 0; pos < n; ++pos) {
    int rem = n - pos - 1;
    Integer full = ipow(k, rem);
    bool found = false;
    for (Letter a = 0; a < k && !found; ++a) {
      std::vector<Integer> next(s, 0);
      for (const Transition& tr : t.transitions())
        if (tr.letter == a) next[tr.target] += runs[tr.source];
      Integer count = 0;
      for (int q = 0; q < s; ++q) count += next[q] * acc[rem][q];
      if (count < full) {
        w.push_back(a);
        runs.swap(next);
        found = true;
      }
    }
    if (!found)
      throw Error(Errc::Precondition, "counting", "every word of length " + std::to_string(n) + " is accepted");
  }
  if (n == 0 && t.accepting(t.initial()))
    throw Error(Errc::Precondition, "counting", "the empty word is accepted");
  return w;
}

UniversalityVerdict ufa_universal(const FiniteAutomaton& m) {
  FiniteAutomaton t = linted(m);
  const int s = t.state_count();
  std::vector<Integer> counts = count_runs(t, s);
  UniversalityVerdict v;
  for (int n = 0; n <= s; ++n) {
    if (counts[n] != ipow(t.alphabet().size(), n)) {
      v.kind = UniversalityVerdict::Kind::NotUniversal;
      v.witness_length = n;
      v.witness = shortest_missing_word(t, n);
      return v;
    }
  }
  v.kind = UniversalityVerdict::Kind::Universal;
  return v;
}

ConvRecSystem ucfg_counting_system(const ShortGnfGrammar& g) {
  const int k = g.nonterminal_count();
  ConvRecSystem s;
  for (int x = 0; x < k; ++x) {
    s.names.push_back(g.name(x));
    s.polys.emplace_back(k);
    s.initial.emplace_back(g.has_epsilon(x) ? 1 : 0);
  }
  for (const GnfRule& r : g.rules())
    s.polys[r.lhs] += ConvPolynomial::variable(k, r.first) * ConvPolynomial::variable(k, r.second);
  return s;
}

ConvRecSystem universality_difference_system(const ShortGnfGrammar& g) {
  ConvRecSystem h;
  h.names = {"h"};
  h.polys = {ConvPolynomial::variable(1, 0, g.alphabet().size())};
  h.initial = {1};
  return combine(h, ucfg_counting_system(g), CombineOp::Sub);
}

namespace {

// Leftmost sentential forms of a short-GNF grammar, stored as stacks (top at
// the back) with the number of partial derivations leading to them.
using Stack = std::vector<int>;
using Configs = std::map<Stack, Integer>;

void step(const ShortGnfGrammar& g, const Stack& stack, const Integer& mult, Letter a, Configs& out,
          std::uint64_t& used, std::uint64_t budget) {
  Stack s = stack;
  while (!s.empty()) {
    int x = s.back();
    s.pop_back();
    for (int ri : g.rules_of(x)) {
      const GnfRule& r = g.rules()[ri];
      if (r.letter != a) continue;
      Stack next = s;
      next.push_back(r.second);
      next.push_back(r.first);
      auto [it, inserted] = out.try_emplace(std::move(next), 0);
      it->second += mult;
      if (inserted && ++used > budget)
        throw Error(Errc::Budget, "counting", "witness search budget exceeded");
    }
    if (!g.has_epsilon(x)) break;
  }
}

}  // namespace

Word shortest_missing_word(const ShortGnfGrammar& g, int n, std::uint64_t budget) {
  const int letters = g.alphabet().size();
  PrefixEvaluator ev(ucfg_counting_system(g));
  ev.extend_to(n);
  if (ev.integer_value(g.start(), n) >= ipow(letters, n))
    throw Error(Errc::Precondition, "counting",
                "no word of length " + std::to_string(n) + " is missing (f_S(n) >= |Σ|^n)");
  auto completions = [&](const Stack& stack, int rem) {
    // convolution of f_X over the stack, evaluated at rem
    std::vector<Integer> acc(rem + 1, 0);
    acc[0] = 1;
    for (int x : stack) {
      std::vector<Integer> next(rem + 1, 0);
      for (int i = 0; i <= rem; ++i) {
        if (acc[i] == 0) continue;
        for (int j = 0; i + j <= rem; ++j) next[i + j] += acc[i] * ev.integer_value(x, j);
      }
      acc.swap(next);
    }
    return acc[rem];
  };
  std::uint64_t used = 0;
  Configs configs{{Stack{g.start()}, Integer(1)}};
  Word w;
  for (int pos = 0; pos < n; ++pos) {
    int rem = n - pos - 1;
    Integer full = ipow(letters, rem);
    bool found = false;
    for (Letter a = 0; a < letters && !found; ++a) {
      Configs next;
      for (const auto& [stack, mult] : configs) step(g, stack, mult, a, next, used, budget);
      Integer count = 0;
      for (const auto& [stack, mult] : next) count += mult * completions(stack, rem);
      if (count > full)
        throw AmbiguityDetected("counting", "more derivations than words below prefix '" +
                                                g.alphabet().render(w) + g.alphabet().letter(a) + "'");
      if (count < full) {
        w.push_back(a);
        configs.swap(next);
        found = true;
      }
    }
    if (!found) throw AmbiguityDetected("counting", "derivation counts are inconsistent with unambiguity");
  }
  if (recognizes(g.grammar(), w))
    throw AmbiguityDetected("counting", "guided search ended on an accepted word '" + g.alphabet().render(w) +
                                            "'; the grammar is ambiguous");
  return w;
}

UniversalityVerdict ucfg_universal(const ShortGnfGrammar& g, int N, std::uint64_t witness_budget) {
  PrefixEvaluator ev(universality_difference_system(g));
  ZeronessVerdict z = zeroness_falsify(ev, N);
  UniversalityVerdict v;
  if (!z.nonzero) {
    v.kind = UniversalityVerdict::Kind::UniversalUpTo;
    v.bound = N;
    return v;
  }
  if (ev.value(0, z.index) < 0)
    throw AmbiguityDetected("counting",
                            "f_S(" + std::to_string(z.index) + ") exceeds |Σ|^" + std::to_string(z.index) +
                                ": the grammar is ambiguous",
                            z.index);
  v.kind = UniversalityVerdict::Kind::NotUniversal;
  v.witness_length = z.index;
  try {
    v.witness = shortest_missing_word(g, z.index, witness_budget);
  } catch (const Error& e) {
    if (e.kind() != Errc::Budget) throw;
  }
  return v;
}

}  // namespace ucfg
