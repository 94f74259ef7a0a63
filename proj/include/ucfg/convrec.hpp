#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ucfg/rational.hpp"

namespace ucfg {

using Exponents = std::vector<int>;

/// Sparse multivariate polynomial with rational coefficients. The tag only
/// records how products are read: as sequence convolution (ConvPolynomial) or
/// as ordinary multiplication of numbers/series (Polynomial).
template <typename Tag>
class BasicPolynomial {
 public:
  BasicPolynomial() = default;
  explicit BasicPolynomial(int arity) : arity_(arity) {}

  static BasicPolynomial constant(int arity, const Rational& c) {
    BasicPolynomial p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }
  static BasicPolynomial variable(int arity, int i, const Rational& c = 1) {
    BasicPolynomial p(arity);
    Exponents e(arity, 0);
    e.at(i) = 1;
    p.add_term(e, c);
    return p;
  }

  int arity() const { return arity_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Maximum total exponent; 0 for constants and for the zero polynomial.
  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (int x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != arity_) throw std::invalid_argument("exponent vector arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check(b);
    BasicPolynomial out(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea);
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend BasicPolynomial operator*(const Rational& s, const BasicPolynomial& p) {
    BasicPolynomial out(p.arity_);
    for (const auto& [e, c] : p.terms_) out.add_term(e, s * c);
    return out;
  }

  /// Re-index variables: variable i becomes variable map[i] of `new_arity`.
  BasicPolynomial remap(int new_arity, const std::vector<int>& map) const {
    BasicPolynomial out(new_arity);
    for (const auto& [e, c] : terms_) {
      Exponents ne(new_arity, 0);
      for (size_t i = 0; i < e.size(); ++i) ne.at(map.at(i)) += e[i];
      out.add_term(ne, c);
    }
    return out;
  }

  bool operator==(const BasicPolynomial&) const = default;

 private:
  void check(const BasicPolynomial& o) const {
    if (o.arity_ != arity_) throw std::invalid_argument("polynomial arity mismatch");
  }

  int arity_ = 0;
  std::map<Exponents, Rational> terms_;
};

struct ConvTag {};
struct PlainTag {};
using ConvPolynomial = BasicPolynomial<ConvTag>;
using Polynomial = BasicPolynomial<PlainTag>;

/// sigma f_i = p_i(f_1, ..., f_k), f_i(0) = initial[i]. Component 0 is the
/// sequence of interest.
struct ConvRecSystem {
  std::vector<std::string> names;
  std::vector<ConvPolynomial> polys;
  std::vector<Rational> initial;

  int arity() const { return static_cast<int>(polys.size()); }
  /// Sum of the degrees of the polynomials.
  int combined_degree() const;
  /// Throws convrec.validation on arity or size mismatches.
  void validate() const;

  bool operator==(const ConvRecSystem&) const = default;
};

/// Incremental exact evaluation. Every monomial of degree >= 2 is the
/// convolution of a smaller monomial with one variable; those partial
/// products are memoized, so each new index costs O(n) per monomial node.
/// Systems with integral data run on integers.
class PrefixEvaluator {
 public:
  explicit PrefixEvaluator(const ConvRecSystem& s);
  ~PrefixEvaluator();
  PrefixEvaluator(PrefixEvaluator&&) noexcept;
  PrefixEvaluator& operator=(PrefixEvaluator&&) noexcept;

  /// Largest index computed so far (initially 0).
  int computed() const;
  void extend_to(int n);
  Rational value(int component, int n) const;
  bool integral() const;
  /// Only when integral().
  const Integer& integer_value(int component, int n) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// values[i][n] = f_i(n), n = 0..N.
struct PrefixTable {
  std::vector<std::vector<Rational>> values;
};

PrefixTable eval_prefix(const ConvRecSystem& s, int N);

enum class CombineOp { Add, Sub, Conv };

/// System whose component 0 is a_0 (op) b_0; the operands' components follow.
ConvRecSystem combine(const ConvRecSystem& a, const ConvRecSystem& b, CombineOp op);

/// y_i = f_i(0) + x * p_i(y) with convolution read as multiplication.
/// Variable 0 of each polynomial is x, variable i+1 is y_i.
struct GfSystem {
  std::vector<Polynomial> equations;
  int arity() const { return static_cast<int>(equations.size()); }
};

GfSystem gf_system(const ConvRecSystem& s);
std::string to_text(const GfSystem& g, const std::vector<std::string>& names);

/// (n, f_0(n+1)/f_0(n)) for n < N with f_0(n) != 0.
std::vector<std::pair<int, Rational>> growth_ratio(const ConvRecSystem& s, int N);

struct ZeronessVerdict {
  bool nonzero = false;
  int index = 0;  // least n with f_0(n) != 0 when nonzero
  int bound = 0;  // indices 0..bound were examined
};

/// Bounded falsification: a clean result proves nothing beyond the bound.
ZeronessVerdict zeroness_falsify(const ConvRecSystem& s, int N);
ZeronessVerdict zeroness_falsify(PrefixEvaluator& evaluator, int N);

/// SMT-LIB 2 (QF_NRA) query for
///   exists x, y: 0 <= x < 1/d, y_i = f_i(0) + x * p_i(y), y_1 != 0.
/// It is unsatisfiable exactly when f_1 is the zero sequence.
std::string emit_reals_sentence(const ConvRecSystem& s);

/// Certified interval [lo, hi] with hi - lo = tail.
struct Enclosure {
  Rational lo, hi, tail;
  long terms_used = 0;
};

/// Encloses the generating function of component 0 at x. Requires
/// non-negative data, 0 <= x < 1/d, bound_base * x < 1 and
/// f_0(n) <= bound_base^n on every evaluated entry.
Enclosure eval_gf_enclosure(const ConvRecSystem& s, const Rational& x, int N, const Rational& bound_base);

/// Text format:
///   vars f g
///   init f = 1
///   rec f = f*f + 2*g^2 - 1/3
ConvRecSystem parse_crs(std::string_view text);
std::string serialize(const ConvRecSystem& s);
std::string to_text(const ConvPolynomial& p, const std::vector<std::string>& names);

}  // namespace ucfg
