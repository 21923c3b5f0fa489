#include "forcing/finite_cba.hpp"

#include <bit>
#include <charconv>

#include "forcing/errors.hpp"

namespace forcing {

namespace {

constexpr std::size_t kWords = kMaxAtoms / 64;

void check_atoms(std::size_t atoms) {
  if (atoms > kMaxAtoms) {
    fail(ErrorKind::TooManyAtoms, std::to_string(atoms) + " atoms exceeds " + std::to_string(kMaxAtoms));
  }
}

}  // namespace

Element::Element(std::size_t atoms) : n_(static_cast<std::uint16_t>(atoms)) { check_atoms(atoms); }

Element Element::full(std::size_t atoms) {
  Element e(atoms);
  for (std::size_t i = 0; i < atoms / 64; ++i) e.w_[i] = ~std::uint64_t{0};
  if (atoms % 64) e.w_[atoms / 64] = (std::uint64_t{1} << (atoms % 64)) - 1;
  return e;
}

Element Element::of(std::size_t atoms, std::initializer_list<std::size_t> members) {
  Element e(atoms);
  for (auto m : members) e.set(m);
  return e;
}

Element Element::of(std::size_t atoms, const std::vector<std::size_t>& members) {
  Element e(atoms);
  for (auto m : members) e.set(m);
  return e;
}

Element Element::from_mask(std::size_t atoms, std::uint64_t mask) {
  Element e(atoms);
  e.w_[0] = mask;
  return e & full(atoms);
}

Element& Element::set(std::size_t atom) {
  if (atom >= n_) fail(ErrorKind::ValidationError, "atom " + std::to_string(atom) + " out of range");
  w_[atom >> 6] |= std::uint64_t{1} << (atom & 63);
  return *this;
}

Element& Element::reset(std::size_t atom) {
  if (atom >= n_) fail(ErrorKind::ValidationError, "atom " + std::to_string(atom) + " out of range");
  w_[atom >> 6] &= ~(std::uint64_t{1} << (atom & 63));
  return *this;
}

std::size_t Element::count() const {
  std::size_t c = 0;
  for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool Element::none() const {
  for (auto w : w_) {
    if (w) return false;
  }
  return true;
}

bool Element::all() const { return *this == full(n_); }

std::size_t Element::first() const {
  for (std::size_t i = 0; i < kWords; ++i) {
    if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
  }
  return n_;
}

std::vector<std::size_t> Element::atoms() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kWords; ++i) {
    auto w = w_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

void Element::check_same(const Element& o) const {
  if (n_ != o.n_) {
    fail(ErrorKind::MixedAlgebras,
         "elements of " + std::to_string(n_) + "- and " + std::to_string(o.n_) + "-atom algebras");
  }
}

Element Element::operator|(const Element& o) const {
  Element r = *this;
  r |= o;
  return r;
}

Element Element::operator&(const Element& o) const {
  Element r = *this;
  r &= o;
  return r;
}

Element Element::operator^(const Element& o) const {
  check_same(o);
  Element r = *this;
  for (std::size_t i = 0; i < kWords; ++i) r.w_[i] ^= o.w_[i];
  return r;
}

Element Element::operator~() const {
  Element r = full(n_);
  for (std::size_t i = 0; i < kWords; ++i) r.w_[i] &= ~w_[i];
  return r;
}

Element& Element::operator|=(const Element& o) {
  check_same(o);
  for (std::size_t i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
  return *this;
}

Element& Element::operator&=(const Element& o) {
  check_same(o);
  for (std::size_t i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
  return *this;
}

bool Element::leq(const Element& o) const {
  check_same(o);
  for (std::size_t i = 0; i < kWords; ++i) {
    if (w_[i] & ~o.w_[i]) return false;
  }
  return true;
}

bool Element::disjoint(const Element& o) const {
  check_same(o);
  for (std::size_t i = 0; i < kWords; ++i) {
    if (w_[i] & o.w_[i]) return false;
  }
  return true;
}

std::strong_ordering Element::operator<=>(const Element& o) const {
  if (auto c = n_ <=> o.n_; c != 0) return c;
  for (std::size_t i = kWords; i-- > 0;) {
    if (auto c = w_[i] <=> o.w_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t Element::hash() const {
  std::size_t h = n_;
  for (auto w : w_) h = h * 0x9E3779B97F4A7C15ULL + (w ^ (w >> 29));
  return h;
}

std::string Element::to_string() const {
  std::string s = "{";
  bool first_atom = true;
  for (auto a : atoms()) {
    if (!first_atom) s += ",";
    s += std::to_string(a);
    first_atom = false;
  }
  return s + "}";
}

Element Element::parse(std::string_view text, std::size_t atoms) {
  auto bad = [&](std::size_t pos, const std::string& why) -> Element {
    fail(ErrorKind::SyntaxError, "element '" + std::string(text) + "' at column " + std::to_string(pos + 1) + ": " + why);
  };
  Element e(atoms);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '{') return bad(i, "expected '{'");
  ++i;
  skip();
  if (i < text.size() && text[i] == '}') {
    ++i;
  } else {
    while (true) {
      skip();
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec != std::errc()) return bad(i, "expected atom index");
      if (value >= atoms) return bad(i, "atom " + std::to_string(value) + " not below " + std::to_string(atoms));
      e.set(value);
      i = static_cast<std::size_t>(ptr - text.data());
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == '}') {
        ++i;
        break;
      }
      return bad(i, "expected ',' or '}'");
    }
  }
  skip();
  if (i != text.size()) return bad(i, "trailing input");
  return e;
}

FiniteCBA::FiniteCBA(std::size_t atom_count) : atoms_(atom_count) {
  if (atom_count == 0) fail(ErrorKind::ValidationError, "an algebra needs at least one atom");
  check_atoms(atom_count);
}

Element FiniteCBA::atom(std::size_t k) const { return Element(atoms_).set(k); }

Element FiniteCBA::element(std::initializer_list<std::size_t> members) const { return Element::of(atoms_, members); }

Element FiniteCBA::join(std::span<const Element> xs) const {
  Element r = zero();
  for (const auto& x : xs) r |= x;
  return r;
}

Element FiniteCBA::meet(std::span<const Element> xs) const {
  Element r = one();
  for (const auto& x : xs) r &= x;
  return r;
}

std::vector<Element> FiniteCBA::elements() const {
  if (atoms_ > 24) fail(ErrorKind::TooManyAtoms, "refusing to enumerate 2^" + std::to_string(atoms_) + " elements");
  std::vector<Element> out;
  out.reserve(std::size_t{1} << atoms_);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms_); ++m) out.push_back(Element::from_mask(atoms_, m));
  return out;
}

Relativization::Relativization(const FiniteCBA& parent, const Element& support)
    : support_(support), atoms_(support.atoms()), local_of_(parent.atom_count(), parent.atom_count()) {
  if (!parent.contains(support)) fail(ErrorKind::MixedAlgebras, "support is not an element of the parent algebra");
  if (support.none()) fail(ErrorKind::ZeroRestriction, "cannot restrict below 0");
  algebra_ = FiniteCBA(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) local_of_[atoms_[k]] = k;
}

std::size_t Relativization::local_atom(std::size_t parent) const {
  if (parent >= local_of_.size() || local_of_[parent] == local_of_.size()) {
    fail(ErrorKind::ValidationError, "atom " + std::to_string(parent) + " is not below the support");
  }
  return local_of_[parent];
}

Element Relativization::lower(const Element& parent_element) const {
  Element out = algebra_.zero();
  for (auto a : (parent_element & support_).atoms()) out.set(local_of_[a]);
  return out;
}

Element Relativization::lift(const Element& local) const {
  Element out(support_.size());
  for (auto k : local.atoms()) out.set(atoms_[k]);
  return out;
}

}  // namespace forcing
