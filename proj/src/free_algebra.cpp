#include "forcing/free_algebra.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "forcing/errors.hpp"

namespace forcing {

struct FreeNode {
  const Generator* var;  // nullptr for the two terminals
  const FreeNode* lo;
  const FreeNode* hi;
  bool value;
};

namespace {

struct Key {
  const Generator* var;
  const FreeNode* lo;
  const FreeNode* hi;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    auto h = std::hash<const void*>{};
    return h(k.var) * 31 * 31 + h(k.lo) * 31 + h(k.hi);
  }
};

class NodeStore {
 public:
  static NodeStore& get() {
    static NodeStore store;
    return store;
  }

  const FreeNode* zero() const { return &false_; }
  const FreeNode* one() const { return &true_; }

  const Generator* intern(const Generator& g) {
    std::lock_guard lock(mu_);
    return &*gens_.insert(g).first;
  }

  const FreeNode* make(const Generator* var, const FreeNode* lo, const FreeNode* hi) {
    if (lo == hi) return lo;
    std::lock_guard lock(mu_);
    auto [it, fresh] = unique_.try_emplace(Key{var, lo, hi}, nullptr);
    if (fresh) {
      nodes_.push_back(FreeNode{var, lo, hi, false});
      it->second = &nodes_.back();
    }
    return it->second;
  }

 private:
  NodeStore() = default;
  std::mutex mu_;
  std::set<Generator> gens_;
  std::deque<FreeNode> nodes_;
  std::unordered_map<Key, const FreeNode*, KeyHash> unique_;
  FreeNode false_{nullptr, nullptr, nullptr, false};
  FreeNode true_{nullptr, nullptr, nullptr, true};
};

bool terminal(const FreeNode* n) { return n->var == nullptr; }

// Variable order with terminals after every generator.
bool before(const FreeNode* a, const FreeNode* b) {
  if (terminal(a)) return false;
  if (terminal(b)) return true;
  return *a->var < *b->var;
}

enum class BinOp { And, Or, Xor };

struct PairHash {
  std::size_t operator()(const std::pair<const FreeNode*, const FreeNode*>& p) const {
    return std::hash<const void*>{}(p.first) * 1000003U ^ std::hash<const void*>{}(p.second);
  }
};

using PairMemo = std::unordered_map<std::pair<const FreeNode*, const FreeNode*>, const FreeNode*, PairHash>;
using UnaryMemo = std::unordered_map<const FreeNode*, const FreeNode*>;

const FreeNode* negate(const FreeNode* a, UnaryMemo& memo) {
  auto& s = NodeStore::get();
  if (a == s.zero()) return s.one();
  if (a == s.one()) return s.zero();
  if (auto it = memo.find(a); it != memo.end()) return it->second;
  const FreeNode* r = s.make(a->var, negate(a->lo, memo), negate(a->hi, memo));
  memo.emplace(a, r);
  return r;
}

const FreeNode* apply(BinOp op, const FreeNode* a, const FreeNode* b, PairMemo& memo) {
  auto& s = NodeStore::get();
  const FreeNode* f = s.zero();
  const FreeNode* t = s.one();
  switch (op) {
    case BinOp::And:
      if (a == f || b == f) return f;
      if (a == t) return b;
      if (b == t || a == b) return a;
      break;
    case BinOp::Or:
      if (a == t || b == t) return t;
      if (a == f) return b;
      if (b == f || a == b) return a;
      break;
    case BinOp::Xor:
      if (a == f) return b;
      if (b == f) return a;
      if (a == b) return f;
      break;
  }
  if (op != BinOp::Xor && b < a) std::swap(a, b);
  if (auto it = memo.find({a, b}); it != memo.end()) return it->second;
  const FreeNode* top = before(a, b) ? a : b;
  const Generator* v = top->var;
  auto lo_of = [v](const FreeNode* n) { return n->var == v ? n->lo : n; };
  auto hi_of = [v](const FreeNode* n) { return n->var == v ? n->hi : n; };
  const FreeNode* r =
      s.make(v, apply(op, lo_of(a), lo_of(b), memo), apply(op, hi_of(a), hi_of(b), memo));
  memo.emplace(std::make_pair(a, b), r);
  return r;
}

const FreeNode* quantify(const FreeNode* a, bool existential, const std::function<bool(const Generator&)>& pick,
                         UnaryMemo& memo) {
  if (terminal(a)) return a;
  if (auto it = memo.find(a); it != memo.end()) return it->second;
  const FreeNode* lo = quantify(a->lo, existential, pick, memo);
  const FreeNode* hi = quantify(a->hi, existential, pick, memo);
  const FreeNode* r;
  if (pick(*a->var)) {
    PairMemo m;
    r = apply(existential ? BinOp::Or : BinOp::And, lo, hi, m);
  } else {
    r = NodeStore::get().make(a->var, lo, hi);
  }
  memo.emplace(a, r);
  return r;
}

}  // namespace

struct FreeOps {
  static FreeElement wrap(const FreeNode* n) { return FreeElement(n); }
};

Generator Generator::parse(std::string_view name) {
  if (name.empty()) fail(ErrorKind::SyntaxError, "empty generator name");
  std::size_t cut = name.size();
  while (cut > 0 && name[cut - 1] >= '0' && name[cut - 1] <= '9') --cut;
  if (cut == 0) fail(ErrorKind::SyntaxError, "generator name '" + std::string(name) + "' has no family prefix");
  for (std::size_t i = 0; i < cut; ++i) {
    const char c = name[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || (i > 0 && c >= '0' && c <= '9');
    if (!ok) fail(ErrorKind::SyntaxError, "bad character in generator name '" + std::string(name) + "'");
  }
  Generator g{std::string(name.substr(0, cut)), -1};
  if (cut < name.size()) {
    if (name.size() - cut > 15) fail(ErrorKind::SyntaxError, "generator index too large");
    g.index = std::stoll(std::string(name.substr(cut)));
  }
  return g;
}

std::string Generator::name() const { return index < 0 ? family : family + std::to_string(index); }

FreeElement::FreeElement() : root_(NodeStore::get().zero()) {}
FreeElement FreeElement::zero() { return FreeElement(NodeStore::get().zero()); }
FreeElement FreeElement::one() { return FreeElement(NodeStore::get().one()); }

FreeElement FreeElement::generator(const Generator& g) {
  auto& s = NodeStore::get();
  return FreeElement(s.make(s.intern(g), s.zero(), s.one()));
}

FreeElement FreeElement::parse(std::string_view text) { return free_normalize(parse_free_expr(text)); }

FreeElement FreeElement::operator&(const FreeElement& o) const {
  PairMemo m;
  return FreeElement(apply(BinOp::And, root_, o.root_, m));
}

FreeElement FreeElement::operator|(const FreeElement& o) const {
  PairMemo m;
  return FreeElement(apply(BinOp::Or, root_, o.root_, m));
}

FreeElement FreeElement::operator^(const FreeElement& o) const {
  PairMemo m;
  return FreeElement(apply(BinOp::Xor, root_, o.root_, m));
}

FreeElement FreeElement::operator~() const {
  UnaryMemo m;
  return FreeElement(negate(root_, m));
}

bool FreeElement::is_zero() const { return root_ == NodeStore::get().zero(); }
bool FreeElement::is_one() const { return root_ == NodeStore::get().one(); }

std::vector<Generator> FreeElement::support() const {
  std::unordered_set<const FreeNode*> seen;
  std::set<Generator> vars;
  std::vector<const FreeNode*> stack{root_};
  while (!stack.empty()) {
    const FreeNode* n = stack.back();
    stack.pop_back();
    if (terminal(n) || !seen.insert(n).second) continue;
    vars.insert(*n->var);
    stack.push_back(n->lo);
    stack.push_back(n->hi);
  }
  return {vars.begin(), vars.end()};
}

FreeElement FreeElement::exists(const std::function<bool(const Generator&)>& pick) const {
  UnaryMemo m;
  return FreeElement(quantify(root_, true, pick, m));
}

FreeElement FreeElement::forall(const std::function<bool(const Generator&)>& pick) const {
  UnaryMemo m;
  return FreeElement(quantify(root_, false, pick, m));
}

FreeElement FreeElement::cofactor(const Generator& g, bool value) const {
  const FreeElement lit = value ? generator(g) : ~generator(g);
  return (*this & lit).exists([&g](const Generator& v) { return v == g; });
}

bool FreeElement::evaluate(const std::function<bool(const Generator&)>& assignment) const {
  const FreeNode* n = root_;
  while (!terminal(n)) n = assignment(*n->var) ? n->hi : n->lo;
  return n->value;
}

std::size_t FreeElement::node_count() const {
  std::unordered_set<const FreeNode*> seen;
  std::vector<const FreeNode*> stack{root_};
  while (!stack.empty()) {
    const FreeNode* n = stack.back();
    stack.pop_back();
    if (terminal(n) || !seen.insert(n).second) continue;
    stack.push_back(n->lo);
    stack.push_back(n->hi);
  }
  return seen.size();
}

std::string FreeElement::to_string() const {
  if (is_zero()) return "0";
  if (is_one()) return "1";
  std::vector<std::string> paths;
  std::vector<std::string> lits;
  std::function<void(const FreeNode*)> walk = [&](const FreeNode* n) {
    if (terminal(n)) {
      if (!n->value) return;
      std::string p;
      for (std::size_t i = 0; i < lits.size(); ++i) p += (i ? " & " : "") + lits[i];
      paths.push_back(p.empty() ? "1" : p);
      return;
    }
    lits.push_back("~" + n->var->name());
    walk(n->lo);
    lits.back() = n->var->name();
    walk(n->hi);
    lits.pop_back();
  };
  walk(root_);
  std::string out;
  for (std::size_t i = 0; i < paths.size(); ++i) out += (i ? " | " : "") + paths[i];
  return out;
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  FreeExpr run() {
    FreeExpr e = disjunction();
    skip();
    if (pos_ != text_.size()) error("unexpected input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& why) {
    fail(ErrorKind::SyntaxError,
         "expression '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + why);
  }

  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  FreeExpr disjunction() {
    FreeExpr first = conjunction();
    if (!(peek_or())) return first;
    FreeExpr e{FreeExpr::Op::Or, false, {}, {first}};
    while (eat("|") || eat("∨")) e.args.push_back(conjunction());
    return e;
  }

  bool peek_or() {
    skip();
    return text_.substr(pos_, 1) == "|" || text_.substr(pos_, 3) == "∨";
  }

  bool peek_and() {
    skip();
    return text_.substr(pos_, 1) == "&" || text_.substr(pos_, 3) == "∧";
  }

  FreeExpr conjunction() {
    FreeExpr first = unary();
    if (!peek_and()) return first;
    FreeExpr e{FreeExpr::Op::And, false, {}, {first}};
    while (eat("&") || eat("∧")) e.args.push_back(unary());
    return e;
  }

  FreeExpr unary() {
    if (eat("~") || eat("!") || eat("¬")) return FreeExpr{FreeExpr::Op::Not, false, {}, {unary()}};
    if (eat("(")) {
      FreeExpr e = disjunction();
      if (!eat(")")) error("expected ')'");
      return e;
    }
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (start == pos_) error("expected a generator, 0, 1, '~' or '('");
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "0" || word == "1") return FreeExpr{FreeExpr::Op::Const, word == "1", {}, {}};
    if (word[0] >= '0' && word[0] <= '9') {
      pos_ = start;
      error("generator names start with a letter");
    }
    return FreeExpr{FreeExpr::Op::Var, false, Generator::parse(word), {}};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FreeExpr parse_free_expr(std::string_view text) { return ExprParser(text).run(); }

FreeElement free_normalize(const FreeExpr& expr) {
  switch (expr.op) {
    case FreeExpr::Op::Const: return expr.value ? FreeElement::one() : FreeElement::zero();
    case FreeExpr::Op::Var: return FreeElement::generator(expr.var);
    case FreeExpr::Op::Not: return ~free_normalize(expr.args.at(0));
    case FreeExpr::Op::And: {
      FreeElement r = FreeElement::one();
      for (const auto& a : expr.args) r &= free_normalize(a);
      return r;
    }
    case FreeExpr::Op::Or: {
      FreeElement r = FreeElement::zero();
      for (const auto& a : expr.args) r |= free_normalize(a);
      return r;
    }
  }
  return FreeElement::zero();
}

FreeElement free_project(const FreeElement& e, const std::vector<Generator>& eliminated) {
  return e.exists([&](const Generator& g) {
    return std::find(eliminated.begin(), eliminated.end(), g) != eliminated.end();
  });
}

FreeElement free_project_onto(const FreeElement& e, const std::function<bool(const Generator&)>& keep) {
  return e.exists([&](const Generator& g) { return !keep(g); });
}

FreeElement free_dual_project_onto(const FreeElement& e, const std::function<bool(const Generator&)>& keep) {
  return e.forall([&](const Generator& g) { return !keep(g); });
}

std::string ChainVerdict::to_string() const {
  return (kind == Kind::LowerBoundZero ? "LowerBoundZero(" : "FailsAt(") + std::to_string(n) + ")";
}

ChainVerdict chain_vanishing(const FreeElement& h, const std::function<FreeElement(std::size_t)>& rule,
                             std::optional<std::size_t> max_depth) {
  const std::vector<Generator> supp = h.support();
  std::size_t depth = 3;
  for (const auto& g : supp) depth = std::max<std::size_t>(depth, static_cast<std::size_t>(g.index + 3));
  if (max_depth) depth = *max_depth;
  auto outside = [&supp](const Generator& g) { return !std::binary_search(supp.begin(), supp.end(), g); };
  FreeElement prev = FreeElement::one();
  for (std::size_t n = 0; n <= depth; ++n) {
    const FreeElement a = rule(n);
    if (n > 0 && !a.leq(prev)) fail(ErrorKind::ChainNotDescending, "a_" + std::to_string(n) + " is not below its predecessor");
    if (!h.leq(a)) return {ChainVerdict::Kind::FailsAt, n};
    if (a.forall(outside).is_zero()) return {ChainVerdict::Kind::LowerBoundZero, n};
    prev = a;
  }
  fail(ErrorKind::SupportEscapeViolation, "chain never escaped the support of h within depth " + std::to_string(depth));
}

}  // namespace forcing
