#pragma once

// Coin-flip measure: a word w over an n-letter alphabet has measure
// (1/(n+1))^(|w|+1); a language has the sum over its words.

#include <optional>
#include <string>

#include "ucfg/automaton.hpp"
#include "ucfg/convrec.hpp"
#include "ucfg/grammar.hpp"
#include "ucfg/regex.hpp"

namespace ucfg {

Rational word_measure(std::size_t length, int alphabet_size);
inline Rational word_measure(const Word& w, int alphabet_size) { return word_measure(w.size(), alphabet_size); }

/// Certified interval for a measure; hi - lo == tail.
using MeasureEnclosure = Enclosure;

struct AutomatonMeasure {
  bool exact = true;
  std::optional<Rational> value;  // set when exact
  MeasureEnclosure enclosure;     // degenerate [value, value] when exact
};

/// Solves x_q = [q accepting]/(n+1) + sum over q -a-> r of x_r/(n+1) on the
/// trimmed automaton. Requires unambiguity (checked exactly). If the system
/// were singular, a truncated-series enclosure is returned with exact unset.
AutomatonMeasure measure_automaton_exact(const FiniteAutomaton& m);

/// S_N = sum_{k<=N} f_S(k)/(n+1)^(k+1) with tail (n/(n+1))^(N+1). Every
/// evaluated f_S(k) is checked against n^k (AmbiguityDetected otherwise).
MeasureEnclosure measure_ucfg_terms(const ShortGnfGrammar& g, int N);
/// Smallest N whose tail is at most target_width; fails with a budget error
/// when that N exceeds max_terms.
MeasureEnclosure measure_ucfg_enclosure(const ShortGnfGrammar& g, const Rational& target_width,
                                        int max_terms = 100000);

/// Bottom-up: mu(empty)=0, mu(eps)=1/(n+1), mu(a)=1/(n+1)^2, sums for unions,
/// (n+1) mu(e1) mu(e2) for concatenation, 1/((n+1)(1-(n+1)mu(e))) for stars.
/// With `lint`, the expression's position automaton is first checked for
/// ambiguity (exactly), since the rules count matchings rather than words.
Rational measure_regex_compositional(const Regex& e, int alphabet_size, bool lint = true);

/// Measure of all words of length at most k over an m-letter sub-alphabet of
/// an n-letter alphabet, summed directly.
Rational sub_alphabet_ball_measure(int n, int m, int k);

enum class Cmp { Le, Lt, Gt, Ge };
const char* cmp_name(Cmp c);
Cmp parse_cmp(const std::string& text);
Cmp flip(Cmp c);  // a cmp b  <=>  b flip(cmp) a
bool holds(const Rational& a, Cmp c, const Rational& b);

struct CompareResult {
  enum class Kind { True, False, Unknown };
  Kind kind = Kind::Unknown;
  MeasureEnclosure enclosure;  // the last one computed
};
const char* kind_name(CompareResult::Kind k);

/// Decides mu(L(g)) cmp eps by shrinking enclosures (widths 2^-16, 2^-32, ...)
/// down to `floor`. Unknown is returned when no enclosure separates, which is
/// unavoidable when mu equals eps.
CompareResult compare_measure(const ShortGnfGrammar& g, Cmp cmp, const Rational& eps,
                              const Rational& floor = pow2_neg(256));

}  // namespace ucfg
