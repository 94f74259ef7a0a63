#pragma once

// Constructive hardness instances: a grammar whose coin-flip measure encodes a
// sum of square roots, and the synthesis of unambiguous regular expressions
// with a prescribed rational measure.

#include <optional>
#include <string>
#include <vector>

#include "ucfg/grammar.hpp"
#include "ucfg/measure.hpp"
#include "ucfg/oracle.hpp"
#include "ucfg/regex.hpp"

namespace ucfg {

/// sqrt(d_1) + ... + sqrt(d_n)  cmp  d0
struct SqrtSumInstance {
  Integer d0;
  std::vector<Integer> ds;
  Cmp cmp = Cmp::Le;
};

/// n odd and >= 3, d = max d_i = (n+1)^(2h).
struct NormalizedInstance {
  SqrtSumInstance instance;
  int n = 0;
  Integer d;
  int h = 0;
  bool changed = false;  // an entry was appended (and d0 shifted)
};

/// Keeps instances that already have the required shape. Otherwise picks the
/// final size n' (odd, >= 3, > n), appends (n'+1)^(2h) >= every d_i, pads with
/// zeros and adds (n'+1)^h to d0; the truth of the comparison is unchanged.
NormalizedInstance normalize_instance(const SqrtSumInstance& instance);

/// Exact square root when `v` is a perfect square.
std::optional<Integer> exact_sqrt(const Integer& v);

/// Words of length k over the first m letters: exactly h of them.
/// Requires 0 <= h <= m^k.
Regex e_block(const Integer& h, int k, int m);

/// All words of length at most k over a_1..a_m, as a union by length.
Regex sub_alphabet_ball(int m, int k);

enum class ReprMode { Auto, Finite, Periodic };

/// Intermediate data of the synthesis.
struct ReprTask {
  int n = 0, m = 0;
  Rational c;
  bool full = false;           // c = 1/(n-m+1): e = Σ_m*
  int k = 0;                   // minimal k with c < mu(Σ_m^{<=k})
  Integer ck;                  // words of length k
  std::vector<Integer> digits;  // d_1 .. d_{j1-1}
  int j1 = 1;
  int l = 0;                   // period length; 0 for finite expansions
  std::vector<Integer> period;  // gamma_1 .. gamma_l
  Integer gamma;
};

struct ReprResult {
  Regex regex;
  ReprTask task;
};

/// Unambiguous expression over a_1..a_m with coin-flip measure c w.r.t. an
/// n-letter alphabet. Inputs whose digits exceed the block capacities
/// (d_j > m^(k+j) or gamma > m^(k+j1-1+l)) are rejected with a domain error.
/// In Finite mode a non-terminating expansion is an error as well.
ReprResult repr_regex(int n, int m, const Rational& c, ReprMode mode = ReprMode::Auto);

/// Frozen constants of the size audit. On about 20000 sampled finite tasks
/// (n <= 5, denominators up to (n+1)^12) the worst observed ratios were 0.032
/// for the size and 0.34 for k.
inline constexpr double kSizeAuditK = 0.25;
inline constexpr double kDepthAuditK = 1.0;

struct SizeAudit {
  long size = 0;
  double bound_expr = 0;   // (n*log2 q + j1 + l + 1)^3, log2 q taken as at least 1
  double k_bound = 0;      // n*log2 q
  bool size_ok = false;    // size <= kSizeAuditK * bound_expr
  bool k_ok = false;       // k <= kDepthAuditK * k_bound
};

SizeAudit regex_size_audit(const Regex& e, const ReprTask& task);

enum class Construction {
  Direct,     // X_i <- C_i | A X_i a_n X_i with C_i over a_1..a_{n-1}
  Separated,  // same shape, but no word of C_i starts with a letter of A
};
const char* construction_name(Construction c);
Construction parse_construction(const std::string& text);

/// mu(L(X0)) = offset - scale * sum sqrt(d_i) and eps = offset - scale * d0,
/// provided the grammar is unambiguous.
struct SqrtSumGrammar {
  Construction construction = Construction::Direct;
  ShortGnfGrammar grammar;
  SqrtSumInstance instance;  // the instance whose radicands appear in the grammar
  int n = 0;                 // alphabet size
  Rational eps, offset, scale;
  std::vector<Rational> c;           // measure of C_i
  std::vector<Rational> root_scale;  // x_i = 1 - u_i sqrt(d_i)
  std::vector<Regex> leaves;         // C_i
  std::vector<ReprResult> syntheses;  // every repr_regex call
};

/// The grammar as described with the reduction: X0 <- a_i X_i E;
/// X_i <- (rules of C_i) | a_j X_i W_i for j <= (n+1)/2; W_i <- a_n X_i E;
/// A <- a_j E E kept for reference; E <- eps. C_i has measure (1 - d_i/d^2)/2.
///
/// This grammar is ambiguous as soon as some C_i contains a non-empty word
/// starting with a letter of A: X_i then derives e.g. a1 a1 a1 a_n a1 a_n in two
/// ways. Its counting series (derivation trees) still sums to the intended
/// value, so it is kept to reproduce those numbers.
SqrtSumGrammar build_sqrtsum_grammar(const NormalizedInstance& ni);

/// Unambiguous variant. Zero radicands are dropped; n is the least odd number
/// >= max(5, #entries). A = {a_1..a_(n+1)/2}, C_i uses eps and words starting
/// with a_(n+3)/2..a_(n-1), never a_n, so A-letters and a_n parse as brackets.
/// Then mu(C_i) <= 1/4, so each radicand gets its own scale: for T = (n+1)^s and
/// an integer M_i with 1/2 <= d_i M_i^2 / T^2 <= 1, C_i has measure
/// (1 - d_i M_i^2/T^2)/2 and x_i = 1 - sqrt(d_i) M_i/T. X0 <- a_i Q_i X_i where
/// Q_i holds P/M_i words of one length L (P = lcm M_i), which turns the
/// weighted sum into a multiple of sum sqrt(d_i).
SqrtSumGrammar build_separated_grammar(const SqrtSumInstance& instance);

struct SqrtSumReport {
  AmbiguityVerdict lint;
  std::vector<Rational> c_measures;      // compositional
  std::vector<Rational> c_measures_nfa;  // via the position automaton
  bool c_exact = false;
  std::optional<MeasureEnclosure> enclosure;
  std::string enclosure_error;  // set when the enclosure could not be certified
  bool eps_in_enclosure = false;
  std::optional<Rational> expected;  // when all d_i are squares
  std::optional<bool> expected_contained;
  std::optional<bool> fixpoint_identity;  // x_i = c_i + x_i^2/2 for every i
  std::optional<bool> truth;              // exact truth of the comparison
  CompareResult::Kind verdict = CompareResult::Kind::Unknown;
  bool consistent = true;  // verdict agrees with truth when both known
};

/// mu(L(G)) compared with eps, oriented so that the verdict answers the
/// square-root comparison: sum sqrt(d_i) cmp d0  <=>  mu flip(cmp) eps.
/// The lint length is lowered until at most 500000 words are involved.
SqrtSumReport verify_instance(const SqrtSumGrammar& built, const Rational& width, int lint_len = 8);

}  // namespace ucfg
