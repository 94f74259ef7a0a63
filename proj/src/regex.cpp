#include "ucfg/regex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "ucfg/error.hpp"

namespace ucfg {

Regex Regex::empty() { return Regex(std::make_shared<const Node>(Node{Kind::Empty, 0, {}, 1})); }

Regex Regex::eps() { return Regex(std::make_shared<const Node>(Node{Kind::Eps, 0, {}, 1})); }

Regex Regex::letter(Letter a) { return Regex(std::make_shared<const Node>(Node{Kind::Letter, a, {}, 1})); }

// Empty operands of a union and eps operands of a concatenation are dropped;
// a concatenation with an empty operand is empty.
Regex Regex::alt(std::vector<Regex> children) {
  std::erase_if(children, [](const Regex& c) { return c.kind() == Kind::Empty; });
  if (children.empty()) return empty();
  if (children.size() == 1) return children[0];
  long size = 1;
  for (const Regex& c : children) size += c.size();
  return Regex(std::make_shared<const Node>(Node{Kind::Union, 0, std::move(children), size}));
}

Regex Regex::seq(std::vector<Regex> children) {
  for (const Regex& c : children)
    if (c.kind() == Kind::Empty) return empty();
  std::erase_if(children, [](const Regex& c) { return c.kind() == Kind::Eps; });
  if (children.empty()) return eps();
  if (children.size() == 1) return children[0];
  long size = 1;
  for (const Regex& c : children) size += c.size();
  return Regex(std::make_shared<const Node>(Node{Kind::Concat, 0, std::move(children), size}));
}

Regex Regex::star(Regex child) {
  long size = 1 + child.size();
  return Regex(std::make_shared<const Node>(Node{Kind::Star, 0, {std::move(child)}, size}));
}

bool operator==(const Regex& a, const Regex& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.kind() == Regex::Kind::Letter) return a.letter() == b.letter();
  return a.children() == b.children();
}

namespace {

bool is_operator(char c) { return c == '(' || c == ')' || c == '|' || c == '*'; }

std::vector<std::string> lex(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_operator(c)) {
      out.emplace_back(1, c);
      ++i;
    } else {
      size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && !is_operator(text[j])) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

class Parser {
 public:
  Parser(std::vector<std::string> tokens, const Alphabet& alphabet)
      : tokens_(std::move(tokens)), alphabet_(alphabet) {}

  Regex parse() {
    if (tokens_.empty()) throw Error(Errc::Parse, "lang", "empty regular expression");
    Regex e = parse_union();
    if (pos_ != tokens_.size()) fail("unexpected '" + tokens_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::Parse, "lang", "regex token " + std::to_string(pos_ + 1) + ": " + msg);
  }

  bool at(const char* tok) const { return pos_ < tokens_.size() && tokens_[pos_] == tok; }

  Regex parse_union() {
    std::vector<Regex> parts{parse_concat()};
    while (at("|")) {
      ++pos_;
      parts.push_back(parse_concat());
    }
    return Regex::alt(std::move(parts));
  }

  Regex parse_concat() {
    std::vector<Regex> parts;
    while (pos_ < tokens_.size() && !at("|") && !at(")")) {
      std::vector<Regex> atoms = parse_postfix();
      parts.insert(parts.end(), atoms.begin(), atoms.end());
    }
    if (parts.empty()) fail("missing operand");
    return Regex::seq(std::move(parts));
  }

  // A split multi-letter token yields several atoms; a trailing star binds to
  // the last one only.
  std::vector<Regex> parse_postfix() {
    std::vector<Regex> atoms = parse_atom();
    while (at("*")) {
      ++pos_;
      atoms.back() = Regex::star(atoms.back());
    }
    return atoms;
  }

  std::vector<Regex> parse_atom() {
    if (pos_ >= tokens_.size()) fail("unexpected end of input");
    const std::string& tok = tokens_[pos_];
    if (tok == "(") {
      ++pos_;
      Regex inner = parse_union();
      if (!at(")")) fail("missing ')'");
      ++pos_;
      return {inner};
    }
    if (tok == "*" || tok == ")" || tok == "|") fail("unexpected '" + tok + "'");
    ++pos_;
    if (tok == "eps") return {Regex::eps()};
    if (tok == "empty") return {Regex::empty()};
    if (auto a = alphabet_.find(tok)) return {Regex::letter(*a)};
    std::vector<Regex> split;
    for (char c : tok) {
      auto a = alphabet_.find(std::string(1, c));
      if (!a) {
        --pos_;
        fail("unknown letter '" + tok + "'");
      }
      split.push_back(Regex::letter(*a));
    }
    return split;
  }

  std::vector<std::string> tokens_;
  const Alphabet& alphabet_;
  size_t pos_ = 0;
};

void write(std::ostream& out, const Regex& e, const Alphabet& alphabet) {
  auto child = [&](const Regex& c, bool parens) {
    if (parens) out << '(';
    write(out, c, alphabet);
    if (parens) out << ')';
  };
  switch (e.kind()) {
    case Regex::Kind::Empty: out << "empty"; break;
    case Regex::Kind::Eps: out << "eps"; break;
    case Regex::Kind::Letter: out << alphabet.letter(e.letter()); break;
    case Regex::Kind::Union:
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) out << " | ";
        child(e.children()[i], e.children()[i].kind() == Regex::Kind::Union);
      }
      break;
    case Regex::Kind::Concat:
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) out << ' ';
        auto k = e.children()[i].kind();
        child(e.children()[i], k == Regex::Kind::Union || k == Regex::Kind::Concat);
      }
      break;
    case Regex::Kind::Star: {
      auto k = e.child().kind();
      child(e.child(), k == Regex::Kind::Union || k == Regex::Kind::Concat);
      out << '*';
      break;
    }
  }
}

}  // namespace

Regex parse_regex(std::string_view text, const Alphabet& alphabet) {
  return Parser(lex(text), alphabet).parse();
}

std::string to_text(const Regex& e, const Alphabet& alphabet) {
  std::ostringstream out;
  write(out, e, alphabet);
  return out.str();
}

RegexFile parse_regex_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, body;
  std::optional<Alphabet> alphabet;
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "alphabet") {
      if (alphabet) throw Error(Errc::Parse, "lang", "line " + std::to_string(number) + ": second 'alphabet' line");
      std::vector<std::string> letters;
      for (std::string t; ls >> t;) {
        if (t == "eps" || t == "empty" || std::any_of(t.begin(), t.end(), is_operator))
          throw Error(Errc::Parse, "lang", "line " + std::to_string(number) + ": '" + t + "' cannot be a letter");
        letters.push_back(t);
      }
      alphabet = Alphabet(std::move(letters));
      continue;
    }
    body += line;
    body += '\n';
  }
  if (!alphabet) {
    std::vector<std::string> letters;
    for (const std::string& t : lex(body)) {
      if (t.size() == 1 && is_operator(t[0])) continue;
      if (t == "eps" || t == "empty") continue;
      if (std::find(letters.begin(), letters.end(), t) == letters.end()) letters.push_back(t);
    }
    if (letters.empty()) letters.push_back("a");
    alphabet = Alphabet(std::move(letters));
  }
  Regex e = parse_regex(body, *alphabet);
  return {*alphabet, e};
}

std::string serialize(const RegexFile& file) {
  std::string out = "alphabet";
  for (const auto& a : file.alphabet.letters()) out += " " + a;
  out += "\n" + to_text(file.regex, file.alphabet) + "\n";
  return out;
}

bool nullable(const Regex& e) {
  switch (e.kind()) {
    case Regex::Kind::Empty: return false;
    case Regex::Kind::Eps: return true;
    case Regex::Kind::Letter: return false;
    case Regex::Kind::Union:
      return std::any_of(e.children().begin(), e.children().end(), [](const Regex& c) { return nullable(c); });
    case Regex::Kind::Concat:
      return std::all_of(e.children().begin(), e.children().end(), [](const Regex& c) { return nullable(c); });
    case Regex::Kind::Star: return true;
  }
  return false;
}

int letter_bound(const Regex& e) {
  if (e.kind() == Regex::Kind::Letter) return e.letter() + 1;
  int bound = 0;
  for (const Regex& c : e.children()) bound = std::max(bound, letter_bound(c));
  return bound;
}

namespace {

// Glushkov sets with multiplicities.
struct Positions {
  long nullable = 0;
  std::map<int, long> first, last;
  std::map<std::pair<int, int>, long> follow;
};

void add_into(std::map<int, long>& to, const std::map<int, long>& from, long factor) {
  if (factor == 0) return;
  for (auto [p, c] : from) to[p] += c * factor;
}

Positions glushkov(const Regex& e, std::vector<Letter>& letters) {
  Positions out;
  switch (e.kind()) {
    case Regex::Kind::Empty: break;
    case Regex::Kind::Eps: out.nullable = 1; break;
    case Regex::Kind::Letter: {
      int p = static_cast<int>(letters.size());
      letters.push_back(e.letter());
      out.first[p] = 1;
      out.last[p] = 1;
      break;
    }
    case Regex::Kind::Union:
      for (const Regex& c : e.children()) {
        Positions sub = glushkov(c, letters);
        out.nullable += sub.nullable;
        add_into(out.first, sub.first, 1);
        add_into(out.last, sub.last, 1);
        for (auto [k, v] : sub.follow) out.follow[k] += v;
      }
      break;
    case Regex::Kind::Concat: {
      out = glushkov(e.children()[0], letters);
      for (size_t i = 1; i < e.children().size(); ++i) {
        Positions rhs = glushkov(e.children()[i], letters);
        Positions joined;
        joined.nullable = out.nullable * rhs.nullable;
        joined.first = out.first;
        add_into(joined.first, rhs.first, out.nullable);
        joined.last = rhs.last;
        add_into(joined.last, out.last, rhs.nullable);
        joined.follow = std::move(out.follow);
        for (auto [k, v] : rhs.follow) joined.follow[k] += v;
        for (auto [p, cp] : out.last)
          for (auto [q, cq] : rhs.first) joined.follow[{p, q}] += cp * cq;
        out = std::move(joined);
      }
      break;
    }
    case Regex::Kind::Star: {
      out = glushkov(e.child(), letters);
      if (out.nullable != 0)
        throw Error(Errc::Precondition, "lang", "star over a nullable subexpression is not supported");
      out.nullable = 1;
      for (auto [p, cp] : out.last)
        for (auto [q, cq] : out.first) out.follow[{p, q}] += cp * cq;
      break;
    }
  }
  return out;
}

}  // namespace

FiniteAutomaton regex_to_nfa(const Regex& e, const Alphabet& alphabet) {
  if (letter_bound(e) > alphabet.size())
    throw Error(Errc::Validation, "lang", "regex uses a letter outside its alphabet");
  std::vector<Letter> letters;
  Positions g = glushkov(e, letters);
  auto check = [](long weight, const std::string& where) {
    if (weight > 1)
      throw AmbiguityDetected("lang", "regex matches in " + std::to_string(weight) + " ways at " + where);
  };
  check(g.nullable, "the empty word");
  FiniteAutomaton m(alphabet);
  m.add_state("0", g.nullable > 0);
  for (size_t p = 0; p < letters.size(); ++p) {
    long w = g.last.count(static_cast<int>(p)) ? g.last.at(static_cast<int>(p)) : 0;
    check(w, "the end of position " + std::to_string(p + 1));
    m.add_state(std::to_string(p + 1), w > 0);
  }
  for (auto [p, c] : g.first) {
    check(c, "the entry to position " + std::to_string(p + 1));
    m.add_transition(0, letters[p], p + 1);
  }
  for (auto [pq, c] : g.follow) {
    check(c, "the step from position " + std::to_string(pq.first + 1) + " to " + std::to_string(pq.second + 1));
    m.add_transition(pq.first + 1, letters[pq.second], pq.second + 1);
  }
  return m;
}

}  // namespace ucfg
