#include "ucfg/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <type_traits>

#include "ucfg/error.hpp"

namespace ucfg {

std::uint64_t words_up_to(int alphabet_size, int max_len) {
  std::uint64_t total = 0, layer = 1;
  const std::uint64_t cap = UINT64_MAX / 4;
  for (int len = 0; len <= max_len; ++len) {
    total += layer;
    if (total > cap) return cap;
    layer = layer > cap / std::max(1, alphabet_size) ? cap : layer * alphabet_size;
  }
  return total;
}

namespace {

void charge(std::uint64_t& used, std::uint64_t amount, std::uint64_t budget) {
  used += amount;
  if (used > budget)
    throw Error(Errc::Budget, "lang", "enumeration budget of " + std::to_string(budget) + " exceeded");
}

// Span chart over a general grammar. Values are derivation counts (Integer) or
// plain reachability (bool). Same-span dependencies (unit and nullable
// contexts) are solved by rounds of Jacobi iteration.
template <typename T>
class Chart {
 public:
  Chart(const Grammar& g, const Word& w) : g_(g), w_(w), n_(static_cast<int>(w.size())) {
    cells_.assign(static_cast<size_t>(g.nonterminal_count()) * (n_ + 1) * (n_ + 1), T{});
    for (int len = 0; len <= n_; ++len)
      for (int i = 0; i + len <= n_; ++i) solve_span(i, i + len);
  }

  T at(int x, int i, int j) const { return cells_[index(x, i, j)]; }

 private:
  size_t index(int x, int i, int j) const { return (static_cast<size_t>(x) * (n_ + 1) + i) * (n_ + 1) + j; }

  static bool nonzero(const T& v) {
    if constexpr (std::is_same_v<T, bool>) return v;
    else return v != 0;
  }

  T symbol_value(const Symbol& s, int m, int m2) const {
    if (s.terminal) return T(m2 == m + 1 && w_[m] == s.index ? 1 : 0);
    return at(s.index, m, m2);
  }

  T production_value(const Production& p, int i, int j) const {
    std::vector<T> v(j - i + 1, T{});
    v[0] = T(1);
    for (const Symbol& s : p.rhs) {
      std::vector<T> next(j - i + 1, T{});
      for (int m = i; m <= j; ++m) {
        if (!nonzero(v[m - i])) continue;
        int hi = s.terminal ? std::min(j, m + 1) : j;
        for (int m2 = s.terminal ? m + 1 : m; m2 <= hi; ++m2) {
          T c = symbol_value(s, m, m2);
          if (!nonzero(c)) continue;
          if constexpr (std::is_same_v<T, bool>) next[m2 - i] = true;
          else next[m2 - i] += v[m - i] * c;
        }
      }
      v.swap(next);
    }
    return v[j - i];
  }

  void solve_span(int i, int j) {
    const int k = g_.nonterminal_count();
    for (int round = 0;; ++round) {
      std::vector<T> fresh(k, T{});
      for (const Production& p : g_.productions()) {
        T c = production_value(p, i, j);
        if constexpr (std::is_same_v<T, bool>) fresh[p.lhs] = fresh[p.lhs] || c;
        else fresh[p.lhs] += c;
      }
      bool changed = false;
      for (int x = 0; x < k; ++x) {
        if (fresh[x] != cells_[index(x, i, j)]) {
          changed = true;
          cells_[index(x, i, j)] = fresh[x];
        }
      }
      if (!changed) return;
      if constexpr (!std::is_same_v<T, bool>) {
        if (round > k + 1)
          throw Error(Errc::Validation, "lang", "infinitely many derivation trees (cyclic derivation)");
      }
    }
  }

  const Grammar& g_;
  const Word& w_;
  int n_;
  std::vector<T> cells_;
};

void check_letters(const Alphabet& alphabet, const Word& w) {
  for (Letter a : w)
    if (a < 0 || a >= alphabet.size()) throw Error(Errc::Validation, "lang", "word uses a letter outside the alphabet");
}

}  // namespace

bool recognizes(const Grammar& g, const Word& w) {
  check_letters(g.alphabet(), w);
  return Chart<bool>(g, w).at(g.start(), 0, static_cast<int>(w.size()));
}

Integer count_derivations(const Grammar& g, const Word& w) {
  check_letters(g.alphabet(), w);
  return Chart<Integer>(g, w).at(g.start(), 0, static_cast<int>(w.size()));
}

WordsByLength enumerate_words(const Grammar& g, int max_len, std::uint64_t budget) {
  std::uint64_t used = 0;
  charge(used, words_up_to(g.alphabet().size(), max_len), budget);
  WordsByLength out(max_len + 1);
  for (int len = 0; len <= max_len; ++len) {
    Word w(len, 0);
    do {
      if (recognizes(g, w)) out[len].push_back(w);
    } while (next_word(w, g.alphabet().size()));
  }
  return out;
}

WordsByLength enumerate_words(const FiniteAutomaton& m, int max_len, std::uint64_t budget) {
  WordsByLength out(max_len + 1);
  std::uint64_t used = 0;
  Word prefix;
  auto dfs = [&](auto&& self, const std::vector<char>& states) -> void {
    charge(used, 1, budget);
    bool acc = false;
    for (int q = 0; q < m.state_count(); ++q) acc = acc || (states[q] && m.accepting(q));
    if (acc) out[prefix.size()].push_back(prefix);
    if (static_cast<int>(prefix.size()) == max_len) return;
    for (Letter a = 0; a < m.alphabet().size(); ++a) {
      std::vector<char> next(m.state_count(), 0);
      bool any = false;
      for (int q = 0; q < m.state_count(); ++q)
        if (states[q])
          for (auto [x, r] : m.out(q))
            if (x == a) next[r] = 1, any = true;
      if (!any) continue;
      prefix.push_back(a);
      self(self, next);
      prefix.pop_back();
    }
  };
  std::vector<char> init(m.state_count(), 0);
  init[m.initial()] = 1;
  dfs(dfs, init);
  return out;
}

namespace {

using LengthSets = std::vector<std::set<Word>>;

LengthSets regex_sets(const Regex& e, int max_len, std::uint64_t& used, std::uint64_t budget) {
  LengthSets out(max_len + 1);
  auto concat_into = [&](LengthSets& target, const LengthSets& a, const LengthSets& b) {
    for (int i = 0; i <= max_len; ++i)
      for (int j = 0; i + j <= max_len; ++j)
        for (const Word& u : a[i])
          for (const Word& v : b[j]) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            if (target[i + j].insert(std::move(w)).second) charge(used, 1, budget);
          }
  };
  switch (e.kind()) {
    case Regex::Kind::Empty: break;
    case Regex::Kind::Eps: out[0].insert(Word{}); break;
    case Regex::Kind::Letter:
      if (max_len >= 1) out[1].insert(Word{e.letter()});
      break;
    case Regex::Kind::Union:
      for (const Regex& c : e.children()) {
        LengthSets sub = regex_sets(c, max_len, used, budget);
        for (int l = 0; l <= max_len; ++l) out[l].insert(sub[l].begin(), sub[l].end());
      }
      break;
    case Regex::Kind::Concat: {
      out = regex_sets(e.children()[0], max_len, used, budget);
      for (size_t i = 1; i < e.children().size(); ++i) {
        LengthSets rhs = regex_sets(e.children()[i], max_len, used, budget);
        LengthSets joined(max_len + 1);
        concat_into(joined, out, rhs);
        out.swap(joined);
      }
      break;
    }
    case Regex::Kind::Star: {
      LengthSets body = regex_sets(e.child(), max_len, used, budget);
      body[0].clear();
      out[0].insert(Word{});
      // out[l] = union over k >= 1 of body[k] . out[l-k]
      for (int l = 1; l <= max_len; ++l)
        for (int k = 1; k <= l; ++k)
          for (const Word& u : body[k])
            for (const Word& v : out[l - k]) {
              Word w = u;
              w.insert(w.end(), v.begin(), v.end());
              if (out[l].insert(std::move(w)).second) charge(used, 1, budget);
            }
      break;
    }
  }
  return out;
}

}  // namespace

WordsByLength enumerate_words(const Regex& e, int max_len, std::uint64_t budget) {
  std::uint64_t used = 0;
  LengthSets sets = regex_sets(e, max_len, used, budget);
  WordsByLength out(max_len + 1);
  for (int l = 0; l <= max_len; ++l) out[l].assign(sets[l].begin(), sets[l].end());
  return out;
}

AmbiguityVerdict check_unambiguous_up_to(const Grammar& g, int max_len, std::uint64_t budget) {
  std::uint64_t used = 0;
  charge(used, words_up_to(g.alphabet().size(), max_len), budget);
  AmbiguityVerdict verdict;
  verdict.bound = max_len;
  for (int len = 0; len <= max_len; ++len) {
    Word w(len, 0);
    do {
      bool ambiguous;
      try {
        ambiguous = count_derivations(g, w) >= 2;
      } catch (const Error& e) {
        if (e.kind() != Errc::Validation) throw;
        ambiguous = true;
      }
      if (ambiguous) {
        verdict.ambiguous = true;
        verdict.witness = w;
        return verdict;
      }
    } while (next_word(w, g.alphabet().size()));
  }
  return verdict;
}

AmbiguityVerdict check_unambiguous_up_to(const ShortGnfGrammar& g, int max_len, std::uint64_t budget) {
  const int k = g.nonterminal_count();
  // table[x][l]: words of length l derived from x, with their derivation counts
  std::vector<std::vector<std::map<Word, Integer>>> table(k, std::vector<std::map<Word, Integer>>(max_len + 1));
  std::uint64_t used = 0;
  AmbiguityVerdict verdict;
  verdict.bound = max_len;
  for (int x = 0; x < k; ++x)
    if (g.has_epsilon(x)) table[x][0][Word{}] = 1;
  for (int len = 0; len <= max_len; ++len) {
    if (len > 0) {
      for (const GnfRule& r : g.rules()) {
        auto& target = table[r.lhs][len];
        for (int i = 0; i < len; ++i) {
          const auto& left = table[r.first][i];
          const auto& right = table[r.second][len - 1 - i];
          for (const auto& [u, cu] : left)
            for (const auto& [v, cv] : right) {
              Word w;
              w.reserve(len);
              w.push_back(r.letter);
              w.insert(w.end(), u.begin(), u.end());
              w.insert(w.end(), v.begin(), v.end());
              auto [it, inserted] = target.try_emplace(std::move(w), 0);
              if (inserted) charge(used, 1, budget);
              it->second += cu * cv;
            }
        }
      }
    }
    for (const auto& [w, c] : table[g.start()][len]) {
      if (c >= 2) {
        verdict.ambiguous = true;
        verdict.witness = w;
        return verdict;
      }
    }
  }
  return verdict;
}

WordCountTable word_counts(const WordsByLength& words) {
  WordCountTable table;
  for (const auto& layer : words) table.counts.emplace_back(static_cast<unsigned long>(layer.size()));
  return table;
}

}  // namespace ucfg
