#include "forcing/bvm.hpp"

#include <algorithm>
#include <set>

#include "forcing/errors.hpp"

namespace forcing {

// ---- hereditarily finite sets

HFSet HFSet::of(std::vector<HFSet> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  HFSet s;
  for (const auto& m : members) s.rank_ = std::max(s.rank_, m.rank_ + 1);
  s.members_ = std::move(members);
  return s;
}

std::strong_ordering HFSet::operator<=>(const HFSet& o) const {
  return std::lexicographical_compare_three_way(members_.begin(), members_.end(), o.members_.begin(),
                                                o.members_.end());
}

bool HFSet::contains(const HFSet& x) const { return std::binary_search(members_.begin(), members_.end(), x); }

bool HFSet::subset_of(const HFSet& x) const {
  return std::includes(x.members_.begin(), x.members_.end(), members_.begin(), members_.end());
}

std::string HFSet::to_string() const {
  std::string s = "{";
  for (std::size_t k = 0; k < members_.size(); ++k) s += (k ? "," : "") + members_[k].to_string();
  return s + "}";
}

namespace {

HFSet parse_hf(std::string_view text, std::size_t& pos) {
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto bad = [&](const char* why) {
    fail(ErrorKind::SyntaxError, "set '" + std::string(text) + "' at column " + std::to_string(pos + 1) + ": " + why);
  };
  skip();
  if (pos >= text.size() || text[pos] != '{') bad("expected '{'");
  ++pos;
  std::vector<HFSet> members;
  skip();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
    return HFSet::of({});
  }
  while (true) {
    members.push_back(parse_hf(text, pos));
    skip();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return HFSet::of(std::move(members));
    }
    bad("expected ',' or '}'");
  }
}

}  // namespace

HFSet HFSet::parse(std::string_view text) {
  std::size_t pos = 0;
  HFSet s = parse_hf(text, pos);
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos != text.size()) {
    fail(ErrorKind::SyntaxError, "set '" + std::string(text) + "': trailing input at column " + std::to_string(pos + 1));
  }
  return s;
}

std::vector<HFSet> hf_sets_of_rank_at_most(std::size_t r) {
  std::vector<HFSet> level{HFSet()};  // rank <= 0
  for (std::size_t k = 0; k < r; ++k) {
    if (level.size() > 20) fail(ErrorKind::TooManyAtoms, "too many hereditarily finite sets to list");
    std::vector<HFSet> next;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << level.size()); ++m) {
      std::vector<HFSet> members;
      for (std::size_t i = 0; i < level.size(); ++i) {
        if ((m >> i) & 1U) members.push_back(level[i]);
      }
      next.push_back(HFSet::of(std::move(members)));
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return level;
}

// ---- names

struct NameNode {
  std::size_t atoms = 0;
  std::size_t rank = 0;
  std::size_t hash = 0;
  std::vector<BName::Entry> entries;
};

namespace {

std::size_t mix_hash(std::size_t h, std::size_t v) { return (h ^ v) * 0x100000001B3ULL + (h >> 17); }

}  // namespace

BName BName::empty(std::size_t atoms) { return from_entries(atoms, {}); }

BName BName::check(const HFSet& x, std::size_t atoms) {
  std::vector<Entry> entries;
  for (const auto& m : x.members()) entries.push_back({check(m, atoms), Element::full(atoms)});
  return from_entries(atoms, std::move(entries));
}

BName BName::from_entries(std::size_t atoms, std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.value.size() != atoms || e.name.atoms() != atoms) {
      fail(ErrorKind::MixedAlgebras, "name entry from a different algebra");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  std::vector<Entry> merged;
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().name == e.name) {
      merged.back().value |= e.value;
    } else {
      merged.push_back(std::move(e));
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.value.none(); });
  auto node = std::make_shared<NameNode>();
  node->atoms = atoms;
  node->hash = mix_hash(atoms, merged.size());
  for (const auto& e : merged) {
    node->rank = std::max(node->rank, e.name.rank() + 1);
    node->hash = mix_hash(mix_hash(node->hash, e.name.node_->hash), e.value.hash());
  }
  node->entries = std::move(merged);
  BName n;
  n.node_ = std::move(node);
  return n;
}

std::size_t BName::atoms() const { return node_ ? node_->atoms : 0; }
std::size_t BName::rank() const { return node_ ? node_->rank : 0; }

const std::vector<BName::Entry>& BName::entries() const {
  static const std::vector<Entry> none;
  return node_ ? node_->entries : none;
}

Element BName::value_at(const BName& child) const {
  for (const auto& e : entries()) {
    if (e.name == child) return e.value;
  }
  return Element(atoms());
}

std::strong_ordering BName::operator<=>(const BName& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (!node_ || !o.node_) return node_ ? std::strong_ordering::greater : std::strong_ordering::less;
  // hash first: cheap, and still a deterministic total order
  if (auto c = node_->hash <=> o.node_->hash; c != 0) return c;
  if (auto c = node_->atoms <=> o.node_->atoms; c != 0) return c;
  if (auto c = node_->entries.size() <=> o.node_->entries.size(); c != 0) return c;
  for (std::size_t k = 0; k < node_->entries.size(); ++k) {
    const auto& a = node_->entries[k];
    const auto& b = o.node_->entries[k];
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.value <=> b.value; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string BName::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& e : entries()) {
    s += (first ? "" : ", ") + e.name.to_string() + "@" + e.value.to_string();
    first = false;
  }
  return s + "}";
}

// ---- formulas

Formula Formula::atom(Kind k, std::string lhs, std::string rhs) {
  if (k != Kind::In && k != Kind::Eq && k != Kind::Sub) fail(ErrorKind::ValidationError, "not an atomic kind");
  Formula f;
  f.kind_ = k;
  f.lhs_ = std::move(lhs);
  f.rhs_ = std::move(rhs);
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind_ = Kind::Not;
  f.children_.push_back(std::move(g));
  return f;
}

Formula Formula::conjunction(Formula g, Formula h) {
  Formula f;
  f.kind_ = Kind::And;
  f.children_ = {std::move(g), std::move(h)};
  return f;
}

Formula Formula::disjunction(Formula g, Formula h) {
  Formula f;
  f.kind_ = Kind::Or;
  f.children_ = {std::move(g), std::move(h)};
  return f;
}

Formula Formula::bounded(Kind k, std::string var, std::string bound, Formula body) {
  if (k != Kind::BoundedExists && k != Kind::BoundedForall) fail(ErrorKind::ValidationError, "not a bounded quantifier");
  Formula f;
  f.kind_ = k;
  f.lhs_ = std::move(var);
  f.rhs_ = std::move(bound);
  f.children_.push_back(std::move(body));
  return f;
}

Formula Formula::exists(std::string var, Formula body) {
  Formula f;
  f.kind_ = Kind::Exists;
  f.lhs_ = std::move(var);
  f.children_.push_back(std::move(body));
  return f;
}

bool Formula::is_delta0() const {
  if (kind_ == Kind::Exists) return false;
  for (const auto& c : children_) {
    if (!c.is_delta0()) return false;
  }
  return true;
}

std::vector<std::string> Formula::free_variables() const {
  std::set<std::string> out;
  switch (kind_) {
    case Kind::In:
    case Kind::Eq:
    case Kind::Sub:
      out = {lhs_, rhs_};
      break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (const auto& c : children_) {
        for (auto& v : c.free_variables()) out.insert(v);
      }
      break;
    case Kind::BoundedExists:
    case Kind::BoundedForall:
    case Kind::Exists:
      for (auto& v : children_[0].free_variables()) out.insert(v);
      out.erase(lhs_);
      if (kind_ != Kind::Exists) out.insert(rhs_);
      break;
  }
  return {out.begin(), out.end()};
}

std::string Formula::to_string() const {
  switch (kind_) {
    case Kind::In: return lhs_ + " in " + rhs_;
    case Kind::Eq: return lhs_ + " = " + rhs_;
    case Kind::Sub: return lhs_ + " sub " + rhs_;
    case Kind::Not: return "~(" + children_[0].to_string() + ")";
    case Kind::And: return "(" + children_[0].to_string() + " & " + children_[1].to_string() + ")";
    case Kind::Or: return "(" + children_[0].to_string() + " | " + children_[1].to_string() + ")";
    case Kind::BoundedExists: return "(exists " + lhs_ + " in " + rhs_ + ". " + children_[0].to_string() + ")";
    case Kind::BoundedForall: return "(forall " + lhs_ + " in " + rhs_ + ". " + children_[0].to_string() + ")";
    case Kind::Exists: return "(exists " + lhs_ + ". " + children_[0].to_string() + ")";
  }
  return {};
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula run() {
    Formula f = disjunction();
    skip();
    if (pos_ != text_.size()) error("unexpected input");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& why) {
    fail(ErrorKind::SyntaxError,
         "formula '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + why);
  }

  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
  }

  static bool word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  bool eat_symbol(std::string_view sym) {
    skip();
    if (text_.substr(pos_, sym.size()) == sym) {
      pos_ += sym.size();
      return true;
    }
    return false;
  }

  bool eat_word(std::string_view w) {
    skip();
    if (text_.substr(pos_, w.size()) == w && (pos_ + w.size() == text_.size() || !word_char(text_[pos_ + w.size()]))) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) error("expected a variable");
    std::string w(text_.substr(start, pos_ - start));
    if (w == "in" || w == "sub" || w == "exists" || w == "forall") {
      pos_ = start;
      error("keyword '" + w + "' used as a variable");
    }
    return w;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat_symbol("|") || eat_symbol("∨")) f = Formula::disjunction(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (eat_symbol("&") || eat_symbol("∧")) f = Formula::conjunction(std::move(f), unary());
    return f;
  }

  bool eat_in() { return eat_word("in") || eat_symbol("∈"); }

  void expect_dot() {
    if (!(eat_symbol(".") || eat_symbol(":"))) error("expected '.' after the quantifier prefix");
  }

  Formula unary() {
    if (eat_symbol("~") || eat_symbol("!") || eat_symbol("¬")) return Formula::negation(unary());
    if (eat_symbol("(")) {
      Formula f = disjunction();
      if (!eat_symbol(")")) error("expected ')'");
      return f;
    }
    if (eat_word("exists") || eat_symbol("∃")) {
      std::string var = ident();
      if (eat_in()) {
        std::string bound = ident();
        expect_dot();
        return Formula::bounded(Formula::Kind::BoundedExists, std::move(var), std::move(bound), disjunction());
      }
      expect_dot();
      return Formula::exists(std::move(var), disjunction());
    }
    if (eat_word("forall") || eat_symbol("∀")) {
      std::string var = ident();
      if (!eat_in()) error("universal quantifiers must be bounded");
      std::string bound = ident();
      expect_dot();
      return Formula::bounded(Formula::Kind::BoundedForall, std::move(var), std::move(bound), disjunction());
    }
    std::string lhs = ident();
    Formula::Kind k;
    if (eat_in()) {
      k = Formula::Kind::In;
    } else if (eat_word("sub") || eat_symbol("⊆")) {
      k = Formula::Kind::Sub;
    } else if (eat_symbol("=")) {
      k = Formula::Kind::Eq;
    } else {
      error("expected 'in', '=' or 'sub'");
    }
    return Formula::atom(k, std::move(lhs), ident());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula Formula::parse(std::string_view text) { return FormulaParser(text).run(); }

// ---- Boolean truth values

std::size_t Valuator::KeyHash::operator()(const Key& k) const {
  return std::hash<const void*>{}(k.first) * 1000003U ^ std::hash<const void*>{}(k.second);
}

Valuator::Valuator(std::size_t atoms, std::vector<BName> pool, std::size_t rank_bound)
    : atoms_(atoms), pool_(std::move(pool)), rank_bound_(rank_bound) {
  for (const auto& p : pool_) admit(p);
}

void Valuator::admit(const BName& n) {
  if (n.atoms() != atoms_) {
    fail(ErrorKind::MixedAlgebras,
         "name over " + std::to_string(n.atoms()) + " atoms used with a " + std::to_string(atoms_) + "-atom algebra");
  }
  if (n.rank() > rank_bound_) {
    fail(ErrorKind::RankExceeded, "name of rank " + std::to_string(n.rank()) + " exceeds bound " +
                                      std::to_string(rank_bound_));
  }
  pinned_.push_back(n);
  if (pinned_.size() > 4096) {
    // Names kept alive by the memo only need one pin each.
    std::sort(pinned_.begin(), pinned_.end(), [](const BName& a, const BName& b) { return a.id() < b.id(); });
    pinned_.erase(std::unique(pinned_.begin(), pinned_.end(),
                              [](const BName& a, const BName& b) { return a.id() == b.id(); }),
                  pinned_.end());
  }
}

Element Valuator::member_raw(const BName& a, const BName& b) {
  Element out(atoms_);
  for (const auto& e : b.entries()) {
    if (e.value.disjoint(~out)) continue;
    out |= e.value & equal_raw(e.name, a);
  }
  return out;
}

Element Valuator::subset_raw(const BName& a, const BName& b) {
  const Key key{a.id(), b.id()};
  if (auto it = sub_memo_.find(key); it != sub_memo_.end()) return it->second;
  Element out = Element::full(atoms_);
  for (const auto& e : a.entries()) {
    out &= ~e.value | member_raw(e.name, b);
    if (out.none()) break;
  }
  sub_memo_.emplace(key, out);
  return out;
}

Element Valuator::equal_raw(const BName& a, const BName& b) {
  if (a.id() == b.id()) return Element::full(atoms_);
  const Key key = a.id() < b.id() ? Key{a.id(), b.id()} : Key{b.id(), a.id()};
  if (auto it = eq_memo_.find(key); it != eq_memo_.end()) return it->second;
  Element out = subset_raw(a, b);
  if (out.any()) out &= subset_raw(b, a);
  eq_memo_.emplace(key, out);
  return out;
}

Element Valuator::member(const BName& a, const BName& b) {
  admit(a);
  admit(b);
  return member_raw(a, b);
}

Element Valuator::equal(const BName& a, const BName& b) {
  admit(a);
  admit(b);
  return equal_raw(a, b);
}

Element Valuator::subset(const BName& a, const BName& b) {
  admit(a);
  admit(b);
  return subset_raw(a, b);
}

Element Valuator::value(const Formula& f, const NameEnv& env) {
  for (const auto& [_, n] : env) admit(n);
  NameEnv scratch = env;
  return eval(f, scratch);
}

Element Valuator::eval(const Formula& f, NameEnv& env) {
  auto lookup = [&](const std::string& v) -> const BName& {
    auto it = env.find(v);
    if (it == env.end()) fail(ErrorKind::UnresolvedReference, "variable '" + v + "' is not bound");
    return it->second;
  };
  // Run `body` with `var` bound to each candidate in turn.
  auto bind = [&](const std::string& var, const BName& to, auto&& body) {
    auto it = env.find(var);
    std::optional<BName> saved;
    if (it != env.end()) saved = it->second;
    env[var] = to;
    Element r = body();
    if (saved) {
      env[var] = *saved;
    } else {
      env.erase(var);
    }
    return r;
  };
  switch (f.kind()) {
    case Formula::Kind::In: return member_raw(lookup(f.lhs()), lookup(f.rhs()));
    case Formula::Kind::Eq: return equal_raw(lookup(f.lhs()), lookup(f.rhs()));
    case Formula::Kind::Sub: return subset_raw(lookup(f.lhs()), lookup(f.rhs()));
    case Formula::Kind::Not: return ~eval(f.child(0), env);
    case Formula::Kind::And: {
      Element l = eval(f.child(0), env);
      return l.none() ? l : l & eval(f.child(1), env);
    }
    case Formula::Kind::Or: {
      Element l = eval(f.child(0), env);
      return l.all() ? l : l | eval(f.child(1), env);
    }
    case Formula::Kind::BoundedExists: {
      const BName bound = lookup(f.rhs());
      Element out(atoms_);
      for (const auto& e : bound.entries()) {
        out |= e.value & bind(f.lhs(), e.name, [&] { return eval(f.child(0), env); });
      }
      return out;
    }
    case Formula::Kind::BoundedForall: {
      const BName bound = lookup(f.rhs());
      Element out = Element::full(atoms_);
      for (const auto& e : bound.entries()) {
        out &= ~e.value | bind(f.lhs(), e.name, [&] { return eval(f.child(0), env); });
      }
      return out;
    }
    case Formula::Kind::Exists: {
      Element out(atoms_);
      for (const auto& p : pool_) out |= bind(f.lhs(), p, [&] { return eval(f.child(0), env); });
      return out;
    }
  }
  return Element(atoms_);
}

Element truth_value(const Formula& f, const NameEnv& env, std::size_t atoms, const std::vector<BName>& pool,
                    std::size_t rank_bound) {
  return Valuator(atoms, pool, rank_bound).value(f, env);
}

HFSet eval_at_atom(const BName& name, std::size_t atom) {
  if (atom >= name.atoms()) fail(ErrorKind::ValidationError, "no atom " + std::to_string(atom));
  std::vector<HFSet> members;
  for (const auto& e : name.entries()) {
    if (e.value.test(atom)) members.push_back(eval_at_atom(e.name, atom));
  }
  return HFSet::of(std::move(members));
}

bool hf_holds(const Formula& f, const HFEnv& env, const std::vector<HFSet>& pool) {
  auto lookup = [&](const std::string& v) -> const HFSet& {
    auto it = env.find(v);
    if (it == env.end()) fail(ErrorKind::UnresolvedReference, "variable '" + v + "' is not bound");
    return it->second;
  };
  auto with = [&](const std::string& var, const HFSet& x) {
    HFEnv e = env;
    e[var] = x;
    return hf_holds(f.child(0), e, pool);
  };
  switch (f.kind()) {
    case Formula::Kind::In: return lookup(f.rhs()).contains(lookup(f.lhs()));
    case Formula::Kind::Eq: return lookup(f.lhs()) == lookup(f.rhs());
    case Formula::Kind::Sub: return lookup(f.lhs()).subset_of(lookup(f.rhs()));
    case Formula::Kind::Not: return !hf_holds(f.child(0), env, pool);
    case Formula::Kind::And: return hf_holds(f.child(0), env, pool) && hf_holds(f.child(1), env, pool);
    case Formula::Kind::Or: return hf_holds(f.child(0), env, pool) || hf_holds(f.child(1), env, pool);
    case Formula::Kind::BoundedExists: {
      for (const auto& m : lookup(f.rhs()).members()) {
        if (with(f.lhs(), m)) return true;
      }
      return false;
    }
    case Formula::Kind::BoundedForall: {
      for (const auto& m : lookup(f.rhs()).members()) {
        if (!with(f.lhs(), m)) return false;
      }
      return true;
    }
    case Formula::Kind::Exists: {
      for (const auto& m : pool) {
        if (with(f.lhs(), m)) return true;
      }
      return false;
    }
  }
  return false;
}

std::vector<BName> standard_pool(std::size_t atoms, std::size_t domain_rank) {
  const auto domain = hf_sets_of_rank_at_most(domain_rank);
  std::vector<Element> values;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << atoms); ++m) values.push_back(Element::from_mask(atoms, m));
  if (atoms > 3 || domain.size() > 4) fail(ErrorKind::TooManyAtoms, "standard pool would be too large");
  std::vector<BName> out;
  // each domain point is absent (0) or carries one of the nonzero values
  std::vector<std::size_t> pick(domain.size(), 0);
  while (true) {
    std::vector<BName::Entry> entries;
    for (std::size_t k = 0; k < domain.size(); ++k) {
      if (pick[k] > 0) entries.push_back({BName::check(domain[k], atoms), values[pick[k] - 1]});
    }
    out.push_back(BName::from_entries(atoms, std::move(entries)));
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == values.size() + 1) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return out;
}

namespace {

// Calls visit(assignment) for every map from vars into indices [0, n).
template <class F>
void for_each_assignment(std::size_t vars, std::size_t n, F&& visit) {
  std::vector<std::size_t> idx(vars, 0);
  while (true) {
    visit(idx);
    std::size_t k = 0;
    while (k < vars && ++idx[k] == n) idx[k++] = 0;
    if (k == vars) break;
  }
}

}  // namespace

AuditResult forcing_audit(std::size_t atoms, const std::vector<BName>& pool, const std::vector<Formula>& formulas,
                          std::size_t rank_bound) {
  if (pool.empty()) fail(ErrorKind::EmptyPool, "the forcing audit needs a nonempty pool");
  Valuator val(atoms, pool, rank_bound);
  std::vector<std::vector<HFSet>> pool_at(atoms);
  for (std::size_t u = 0; u < atoms; ++u) {
    for (const auto& p : pool) pool_at[u].push_back(eval_at_atom(p, u));
  }
  AuditResult r{"forcing", {}, {}};
  CheckBuilder los("u in [[phi]] iff phi holds at u");
  std::size_t divergences = 0;
  for (const auto& f : formulas) {
    const auto vars = f.free_variables();
    for_each_assignment(vars.size(), pool.size(), [&](const std::vector<std::size_t>& idx) {
      NameEnv env;
      for (std::size_t k = 0; k < vars.size(); ++k) env.emplace(vars[k], pool[idx[k]]);
      const Element tv = val.value(f, env);
      for (std::size_t u = 0; u < atoms; ++u) {
        HFEnv hf;
        for (std::size_t k = 0; k < vars.size(); ++k) hf.emplace(vars[k], pool_at[u][idx[k]]);
        const bool ok = tv.test(u) == hf_holds(f, hf, pool_at[u]);
        divergences += !ok;
        los.expect_lazy(ok, [&] {
          std::string w = f.to_string() + " at atom " + std::to_string(u) + " with";
          for (std::size_t k = 0; k < vars.size(); ++k) w += " " + vars[k] + "=" + pool[idx[k]].to_string();
          return w;
        });
      }
    });
  }
  r.checks = {los.done()};
  r.facts["divergences"] = std::to_string(divergences);
  return r;
}

BName mix(const std::vector<Element>& antichain, const std::vector<BName>& names) {
  if (antichain.size() != names.size()) fail(ErrorKind::ArityMismatch, "one name per antichain member");
  if (antichain.empty()) fail(ErrorKind::NotAntichain, "empty antichain");
  const std::size_t atoms = antichain[0].size();
  for (std::size_t k = 0; k < antichain.size(); ++k) {
    if (antichain[k].size() != atoms || names[k].atoms() != atoms) {
      fail(ErrorKind::MixedAlgebras, "mixing names over different algebras");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (!antichain[j].disjoint(antichain[k])) {
        fail(ErrorKind::NotAntichain, antichain[j].to_string() + " meets " + antichain[k].to_string());
      }
    }
  }
  std::vector<BName::Entry> entries;
  for (std::size_t k = 0; k < names.size(); ++k) {
    for (const auto& e : names[k].entries()) entries.push_back({e.name, e.value & antichain[k]});
  }
  return BName::from_entries(atoms, std::move(entries));
}

FullnessWitness fullness_witness(const Formula& phi, const std::string& var, const NameEnv& env,
                                 const std::vector<BName>& pool, std::size_t atoms) {
  if (pool.empty()) fail(ErrorKind::EmptyPool, "no candidates to choose a witness from");
  Valuator val(atoms, pool);
  std::vector<Element> values;
  Element exists(atoms);
  for (const auto& p : pool) {
    NameEnv e = env;
    e[var] = p;
    values.push_back(val.value(phi, e));
    exists |= values.back();
  }
  std::vector<Element> cells(pool.size(), Element(atoms));
  for (std::size_t u = 0; u < atoms; ++u) {
    std::size_t choice = 0;
    while (choice < pool.size() && !values[choice].test(u)) ++choice;
    cells[choice == pool.size() ? 0 : choice].set(u);
  }
  std::vector<Element> antichain;
  std::vector<BName> names;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (cells[k].any()) {
      antichain.push_back(cells[k]);
      names.push_back(pool[k]);
    }
  }
  BName w = mix(antichain, names);
  NameEnv e = env;
  e[var] = w;
  return {w, exists, Valuator(atoms, pool).value(phi, e)};
}

BName lift_name(const CompleteHom& h, const BName& name) {
  if (name.atoms() != h.source().atom_count()) fail(ErrorKind::MixedAlgebras, "name is not over the source algebra");
  std::vector<BName::Entry> entries;
  for (const auto& e : name.entries()) entries.push_back({lift_name(h, e.name), h.apply(e.value)});
  return BName::from_entries(h.target().atom_count(), std::move(entries));
}

AuditResult delta1_audit(const CompleteHom& h, const std::vector<BName>& pool, const std::vector<Formula>& formulas,
                         const std::vector<std::pair<Formula, Formula>>& delta1_pairs, std::size_t rank_bound) {
  if (pool.empty()) fail(ErrorKind::EmptyPool, "the lifting audit needs a nonempty pool");
  std::vector<BName> lifted;
  for (const auto& p : pool) lifted.push_back(lift_name(h, p));
  Valuator vb(h.source().atom_count(), pool, rank_bound);
  Valuator vc(h.target().atom_count(), lifted, rank_bound);
  auto both = [&](const Formula& f, const std::vector<std::string>& vars, const std::vector<std::size_t>& idx) {
    NameEnv eb, ec;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      eb.emplace(vars[k], pool[idx[k]]);
      ec.emplace(vars[k], lifted[idx[k]]);
    }
    return std::make_pair(h.apply(vb.value(f, eb)), vc.value(f, ec));
  };

  AuditResult r{"delta1", {}, {}};
  CheckBuilder d0("i([[phi]]) = [[phi^]] for Delta_0 phi");
  CheckBuilder s1("i([[s]]) <= [[s^]] for Sigma_1 s");
  for (const auto& f : formulas) {
    const auto vars = f.free_variables();
    for_each_assignment(vars.size(), pool.size(), [&](const std::vector<std::size_t>& idx) {
      const auto [down, up] = both(f, vars, idx);
      if (f.is_delta0()) {
        d0.expect_lazy(down == up, [&] { return f.to_string(); });
      } else {
        s1.expect_lazy(down.leq(up), [&] { return f.to_string(); });
      }
    });
  }
  CheckBuilder pair_le("both Sigma_1 inequalities for Delta_1 pairs");
  CheckBuilder pair_eq("equality for Delta_1 pairs");
  std::size_t premises_met = 0;
  for (const auto& [s, t] : delta1_pairs) {
    std::set<std::string> all;
    for (auto& v : s.free_variables()) all.insert(v);
    for (auto& v : t.free_variables()) all.insert(v);
    const std::vector<std::string> vars(all.begin(), all.end());
    for_each_assignment(vars.size(), pool.size(), [&](const std::vector<std::size_t>& idx) {
      const auto [is, ss] = both(s, vars, idx);
      const auto [it, tt] = both(t, vars, idx);
      pair_le.expect_lazy(is.leq(ss) && it.leq(tt), [&] { return s.to_string() + " / " + t.to_string(); });
      if ((is | it).all() && ss.disjoint(tt)) {
        ++premises_met;
        pair_eq.expect_lazy(is == ss, [&] { return s.to_string(); });
      }
    });
  }
  r.checks = {d0.done(), s1.done(), pair_le.done(), pair_eq.done()};
  r.facts["delta1-instances"] = std::to_string(premises_met);
  return r;
}

}  // namespace forcing
