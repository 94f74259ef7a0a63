#include "ucfg/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

#include "ucfg/error.hpp"

namespace ucfg {

std::optional<int> FiniteAutomaton::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteAutomaton::add_state(const std::string& name, bool accepting) {
  if (name.empty() || name[0] == '#' ||
      std::any_of(name.begin(), name.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
    throw Error(Errc::Validation, "lang", "invalid state name '" + name + "'");
  if (index_.count(name)) throw Error(Errc::Validation, "lang", "duplicate state '" + name + "'");
  int id = state_count();
  names_.push_back(name);
  index_.emplace(name, id);
  accepting_.push_back(accepting);
  out_.emplace_back();
  return id;
}

std::string FiniteAutomaton::fresh_state_name(const std::string& stem) const {
  std::string name = stem;
  while (index_.count(name)) name += '\'';
  return name;
}

void FiniteAutomaton::set_initial(int q) {
  if (q < 0 || q >= state_count()) throw Error(Errc::Validation, "lang", "initial state is not declared");
  initial_ = q;
}

void FiniteAutomaton::add_transition(int source, Letter letter, int target) {
  if (source < 0 || source >= state_count() || target < 0 || target >= state_count())
    throw Error(Errc::Validation, "lang", "transition endpoint is not a declared state");
  if (letter < 0 || letter >= alphabet_.size()) throw Error(Errc::Validation, "lang", "transition letter out of range");
  Transition t{source, letter, target};
  if (!seen_.insert(t).second)
    throw Error(Errc::Validation, "lang",
                "duplicate transition " + names_[source] + " " + alphabet_.letter(letter) + " " + names_[target]);
  transitions_.push_back(t);
  out_[source].emplace_back(letter, target);
}

bool FiniteAutomaton::has_transition(int source, Letter letter, int target) const {
  return seen_.count({source, letter, target}) != 0;
}

bool operator==(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (!(a.alphabet() == b.alphabet()) || a.state_names() != b.state_names() || a.initial() != b.initial() ||
      a.transitions() != b.transitions())
    return false;
  for (int q = 0; q < a.state_count(); ++q)
    if (a.accepting(q) != b.accepting(q)) return false;
  return true;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(Errc::Parse, "lang", "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

FiniteAutomaton parse_automaton(std::string_view text) {
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int number = 1; std::getline(in, raw); ++number) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) lines.push_back({number, std::move(toks)});
  }
  const Line* alphabet_line = nullptr;
  for (const Line& l : lines) {
    if (l.tokens[0] == "alphabet") {
      if (alphabet_line) parse_fail(l.number, "second 'alphabet' line");
      alphabet_line = &l;
    }
  }
  if (!alphabet_line) throw Error(Errc::Parse, "lang", "missing 'alphabet' line");
  FiniteAutomaton m = [&] {
    try {
      return FiniteAutomaton(Alphabet(std::vector<std::string>(alphabet_line->tokens.begin() + 1,
                                                               alphabet_line->tokens.end())));
    } catch (const Error& e) {
      throw Error(Errc::Parse, "lang", "line " + std::to_string(alphabet_line->number) + ": " + e.what());
    }
  }();
  auto state = [&](const Line& l, const std::string& name) {
    auto q = m.find_state(name);
    if (!q) throw Error(Errc::Validation, "lang", "line " + std::to_string(l.number) + ": undeclared state '" + name + "'");
    return *q;
  };
  bool have_states = false, have_initial = false;
  for (const Line& l : lines) {
    if (l.tokens[0] != "states") continue;
    have_states = true;
    for (size_t i = 1; i < l.tokens.size(); ++i) {
      try {
        m.add_state(l.tokens[i]);
      } catch (const Error& e) {
        parse_fail(l.number, e.what());
      }
    }
  }
  if (!have_states || m.state_count() == 0) throw Error(Errc::Parse, "lang", "missing 'states' line");
  for (const Line& l : lines) {
    const std::string& head = l.tokens[0];
    if (head == "alphabet" || head == "states") continue;
    if (head == "initial") {
      if (have_initial) parse_fail(l.number, "second 'initial' line");
      if (l.tokens.size() != 2) parse_fail(l.number, "'initial' takes exactly one state");
      m.set_initial(state(l, l.tokens[1]));
      have_initial = true;
    } else if (head == "accepting") {
      for (size_t i = 1; i < l.tokens.size(); ++i) m.set_accepting(state(l, l.tokens[i]));
    } else if (head == "trans") {
      if (l.tokens.size() != 4) parse_fail(l.number, "expected 'trans p a q'");
      auto a = m.alphabet().find(l.tokens[2]);
      if (!a) throw Error(Errc::Validation, "lang", "line " + std::to_string(l.number) + ": unknown letter '" + l.tokens[2] + "'");
      try {
        m.add_transition(state(l, l.tokens[1]), *a, state(l, l.tokens[3]));
      } catch (const Error& e) {
        if (e.kind() == Errc::Parse) throw;
        throw Error(e.kind(), "lang", "line " + std::to_string(l.number) + ": " + e.what());
      }
    } else {
      parse_fail(l.number, "unknown directive '" + head + "'");
    }
  }
  if (!have_initial) throw Error(Errc::Parse, "lang", "missing 'initial' line");
  return m;
}

std::string serialize(const FiniteAutomaton& m) {
  std::ostringstream out;
  out << "alphabet";
  for (const auto& a : m.alphabet().letters()) out << ' ' << a;
  out << "\nstates";
  for (const auto& q : m.state_names()) out << ' ' << q;
  out << "\ninitial " << m.state_name(m.initial()) << "\naccepting";
  for (int q = 0; q < m.state_count(); ++q)
    if (m.accepting(q)) out << ' ' << m.state_name(q);
  out << '\n';
  for (const Transition& t : m.transitions())
    out << "trans " << m.state_name(t.source) << ' ' << m.alphabet().letter(t.letter) << ' '
        << m.state_name(t.target) << '\n';
  return out.str();
}

std::optional<std::pair<int, Letter>> find_nondeterminism(const FiniteAutomaton& m) {
  for (int q = 0; q < m.state_count(); ++q) {
    std::vector<char> used(m.alphabet().size(), 0);
    for (auto [a, target] : m.out(q)) {
      (void)target;
      if (used[a]) return std::make_pair(q, a);
      used[a] = 1;
    }
  }
  return std::nullopt;
}

bool is_deterministic(const FiniteAutomaton& m) { return !find_nondeterminism(m).has_value(); }

bool is_total(const FiniteAutomaton& m) {
  for (int q = 0; q < m.state_count(); ++q) {
    std::vector<char> used(m.alphabet().size(), 0);
    for (auto [a, target] : m.out(q)) {
      (void)target;
      used[a] = 1;
    }
    if (std::count(used.begin(), used.end(), 0) != 0) return false;
  }
  return true;
}

FiniteAutomaton totalize(const FiniteAutomaton& m) {
  if (is_total(m)) return m;
  FiniteAutomaton out = m;
  int sink = out.add_state(out.fresh_state_name("sink"));
  int k = m.alphabet().size();
  for (int q = 0; q < out.state_count(); ++q) {
    std::vector<char> used(k, 0);
    for (auto [a, target] : out.out(q)) {
      (void)target;
      used[a] = 1;
    }
    for (Letter a = 0; a < k; ++a)
      if (!used[a]) out.add_transition(q, a, sink);
  }
  return out;
}

FiniteAutomaton complement_dfa(const FiniteAutomaton& m) {
  if (auto bad = find_nondeterminism(m))
    throw Error(Errc::Precondition, "lang",
                "complement_dfa needs a deterministic automaton; state " + m.state_name(bad->first) +
                    " has two transitions on " + m.alphabet().letter(bad->second));
  FiniteAutomaton out = totalize(m);
  for (int q = 0; q < out.state_count(); ++q) out.set_accepting(q, !out.accepting(q));
  return out;
}

FiniteAutomaton product(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (!(a.alphabet() == b.alphabet()))
    throw Error(Errc::Precondition, "lang", "product needs automata over the same alphabet");
  FiniteAutomaton out(a.alphabet());
  std::map<std::pair<int, int>, int> ids;
  std::deque<std::pair<int, int>> queue;
  auto visit = [&](int p, int q) {
    auto key = std::make_pair(p, q);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = out.add_state("(" + a.state_name(p) + "," + b.state_name(q) + ")", a.accepting(p) && b.accepting(q));
    ids.emplace(key, id);
    queue.push_back(key);
    return id;
  };
  out.set_initial(visit(a.initial(), b.initial()));
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    int from = ids.at({p, q});
    for (auto [x, p2] : a.out(p))
      for (auto [y, q2] : b.out(q))
        if (x == y) out.add_transition(from, x, visit(p2, q2));
  }
  return out;
}

FiniteAutomaton disjoint_union(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (!(a.alphabet() == b.alphabet()))
    throw Error(Errc::Precondition, "lang", "disjoint_union needs automata over the same alphabet");
  FiniteAutomaton out(a.alphabet());
  int init = out.add_state("init", a.accepting(a.initial()) || b.accepting(b.initial()));
  out.set_initial(init);
  auto copy = [&](const FiniteAutomaton& m, const std::string& tag) {
    std::vector<int> ids;
    for (int q = 0; q < m.state_count(); ++q) ids.push_back(out.add_state(tag + m.state_name(q), m.accepting(q)));
    for (const Transition& t : m.transitions()) out.add_transition(ids[t.source], t.letter, ids[t.target]);
    for (auto [x, q] : m.out(m.initial())) out.add_transition(init, x, ids[q]);
  };
  copy(a, "1.");
  copy(b, "2.");
  return out;
}

FiniteAutomaton trim(const FiniteAutomaton& m) {
  int n = m.state_count();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<int> stack{m.initial()};
  fwd[m.initial()] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (auto [a, r] : m.out(q)) {
      (void)a;
      if (!fwd[r]) fwd[r] = 1, stack.push_back(r);
    }
  }
  std::vector<std::vector<int>> preds(n);
  for (const Transition& t : m.transitions()) preds[t.target].push_back(t.source);
  for (int q = 0; q < n; ++q)
    if (m.accepting(q)) bwd[q] = 1, stack.push_back(q);
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : preds[q])
      if (!bwd[p]) bwd[p] = 1, stack.push_back(p);
  }
  FiniteAutomaton out(m.alphabet());
  std::vector<int> ids(n, -1);
  for (int q = 0; q < n; ++q)
    if ((fwd[q] && bwd[q]) || q == m.initial()) ids[q] = out.add_state(m.state_name(q), m.accepting(q));
  out.set_initial(ids[m.initial()]);
  bool initial_useful = fwd[m.initial()] && bwd[m.initial()];
  if (initial_useful) {
    for (const Transition& t : m.transitions()) {
      if (fwd[t.source] && bwd[t.source] && fwd[t.target] && bwd[t.target])
        out.add_transition(ids[t.source], t.letter, ids[t.target]);
    }
  }
  return out;
}

bool accepts(const FiniteAutomaton& m, const Word& w) {
  std::vector<char> cur(m.state_count(), 0);
  cur[m.initial()] = 1;
  for (Letter a : w) {
    std::vector<char> next(m.state_count(), 0);
    for (int q = 0; q < m.state_count(); ++q)
      if (cur[q])
        for (auto [x, r] : m.out(q))
          if (x == a) next[r] = 1;
    cur.swap(next);
  }
  for (int q = 0; q < m.state_count(); ++q)
    if (cur[q] && m.accepting(q)) return true;
  return false;
}

Integer run_multiplicity(const FiniteAutomaton& m, const Word& w) {
  std::vector<Integer> cur(m.state_count(), 0);
  cur[m.initial()] = 1;
  for (Letter a : w) {
    std::vector<Integer> next(m.state_count(), 0);
    for (int q = 0; q < m.state_count(); ++q)
      if (cur[q] != 0)
        for (auto [x, r] : m.out(q))
          if (x == a) next[r] += cur[q];
    cur.swap(next);
  }
  Integer total = 0;
  for (int q = 0; q < m.state_count(); ++q)
    if (m.accepting(q)) total += cur[q];
  return total;
}

std::vector<Integer> count_runs(const FiniteAutomaton& m, int max_len) {
  std::vector<Integer> counts;
  std::vector<Integer> cur(m.state_count(), 0);
  cur[m.initial()] = 1;
  for (int len = 0; len <= max_len; ++len) {
    Integer total = 0;
    for (int q = 0; q < m.state_count(); ++q)
      if (m.accepting(q)) total += cur[q];
    counts.push_back(total);
    if (len == max_len) break;
    std::vector<Integer> next(m.state_count(), 0);
    for (const Transition& t : m.transitions())
      if (cur[t.source] != 0) next[t.target] += cur[t.source];
    cur.swap(next);
  }
  return counts;
}

std::optional<Word> find_ambiguous_word(const FiniteAutomaton& m) {
  // Level-by-level search over (p, q, diverged). Nodes first reached by the
  // same word form a group; a group is expanded letter by letter, so every
  // level stays sorted by word and the first target found is the
  // length-lexicographically least witness.
  int n = m.state_count();
  auto key = [n](int p, int q, int d) { return (p * n + q) * 2 + d; };
  std::vector<int> parent(2 * n * n, -2);
  std::vector<Letter> via(2 * n * n, -1);
  auto word_to = [&](int node) {
    Word w;
    for (int v = node; parent[v] >= 0; v = parent[v]) w.push_back(via[v]);
    std::reverse(w.begin(), w.end());
    return w;
  };
  std::vector<std::vector<std::vector<int>>> succ(n, std::vector<std::vector<int>>(m.alphabet().size()));
  for (const Transition& t : m.transitions()) succ[t.source][t.letter].push_back(t.target);

  int start = key(m.initial(), m.initial(), 0);
  parent[start] = -1;
  std::vector<std::vector<int>> level{{start}};
  while (!level.empty()) {
    std::vector<std::vector<int>> next_level;
    for (const auto& group : level) {
      for (Letter a = 0; a < m.alphabet().size(); ++a) {
        std::vector<int> reached;
        for (int node : group) {
          int d = node % 2, pq = node / 2, p = pq / n, q = pq % n;
          for (int p2 : succ[p][a])
            for (int q2 : succ[q][a]) {
              int d2 = d || p2 != q2;
              int next = key(p2, q2, d2);
              if (parent[next] != -2) continue;
              parent[next] = node;
              via[next] = a;
              if (d2 && m.accepting(p2) && m.accepting(q2)) return word_to(next);
              reached.push_back(next);
            }
        }
        if (!reached.empty()) next_level.push_back(std::move(reached));
      }
    }
    level = std::move(next_level);
  }
  return std::nullopt;
}

}  // namespace ucfg
