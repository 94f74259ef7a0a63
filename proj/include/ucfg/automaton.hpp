#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ucfg/alphabet.hpp"
#include "ucfg/rational.hpp"

namespace ucfg {

struct Transition {
  int source = 0;
  Letter letter = 0;
  int target = 0;

  auto operator<=>(const Transition&) const = default;
};

/// Finite automaton with a single initial state. Determinism and
/// unambiguity are properties checked by the functions below, not types.
class FiniteAutomaton {
 public:
  explicit FiniteAutomaton(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const { return alphabet_; }

  int state_count() const { return static_cast<int>(names_.size()); }
  const std::string& state_name(int q) const { return names_.at(q); }
  const std::vector<std::string>& state_names() const { return names_; }
  std::optional<int> find_state(std::string_view name) const;
  int add_state(const std::string& name, bool accepting = false);
  std::string fresh_state_name(const std::string& stem) const;

  int initial() const { return initial_; }
  void set_initial(int q);

  bool accepting(int q) const { return accepting_.at(q) != 0; }
  void set_accepting(int q, bool value = true) { accepting_.at(q) = value; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Throws lang.validation on duplicates or undeclared endpoints.
  void add_transition(int source, Letter letter, int target);
  bool has_transition(int source, Letter letter, int target) const;
  /// (letter, target) pairs leaving `q`, in insertion order.
  const std::vector<std::pair<Letter, int>>& out(int q) const { return out_.at(q); }

 private:
  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<char> accepting_;
  int initial_ = 0;
  std::vector<Transition> transitions_;
  std::set<Transition> seen_;
  std::vector<std::vector<std::pair<Letter, int>>> out_;
};

bool operator==(const FiniteAutomaton& a, const FiniteAutomaton& b);

/// Line format: `alphabet ...`, `states ...`, `initial q`, `accepting q...`,
/// `trans p a q`; `#` comments.
FiniteAutomaton parse_automaton(std::string_view text);
std::string serialize(const FiniteAutomaton& m);

/// First (state, letter) with two outgoing transitions, if any.
std::optional<std::pair<int, Letter>> find_nondeterminism(const FiniteAutomaton& m);
bool is_deterministic(const FiniteAutomaton& m);
bool is_total(const FiniteAutomaton& m);

/// Adds a fresh rejecting sink when some (state, letter) has no successor.
FiniteAutomaton totalize(const FiniteAutomaton& m);
/// Requires determinism (reported with the offending state and letter);
/// totalizes, then flips the accepting set.
FiniteAutomaton complement_dfa(const FiniteAutomaton& m);
/// Synchronous product restricted to reachable pairs; accepts the
/// intersection. Requires equal alphabets.
FiniteAutomaton product(const FiniteAutomaton& a, const FiniteAutomaton& b);
/// Union with a fresh initial state copying both initial states' moves.
/// Unambiguous whenever both inputs are and their languages are disjoint.
FiniteAutomaton disjoint_union(const FiniteAutomaton& a, const FiniteAutomaton& b);
/// Keeps states that are reachable and co-reachable; the initial state always
/// survives.
FiniteAutomaton trim(const FiniteAutomaton& m);

bool accepts(const FiniteAutomaton& m, const Word& w);
/// Number of accepting runs on `w`.
Integer run_multiplicity(const FiniteAutomaton& m, const Word& w);
/// Accepting runs per length 0..max_len.
std::vector<Integer> count_runs(const FiniteAutomaton& m, int max_len);

/// Exact unambiguity test via the self-product of the trimmed automaton.
/// Returns the length-lexicographically first word with two accepting runs.
std::optional<Word> find_ambiguous_word(const FiniteAutomaton& m);

}  // namespace ucfg
