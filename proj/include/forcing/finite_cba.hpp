#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forcing {

inline constexpr std::size_t kMaxAtoms = 256;

// An element of the finite algebra with `size()` atoms, stored as the set of
// atoms below it.
class Element {
 public:
  Element() = default;
  explicit Element(std::size_t atoms);

  static Element full(std::size_t atoms);
  static Element of(std::size_t atoms, std::initializer_list<std::size_t> members);
  static Element of(std::size_t atoms, const std::vector<std::size_t>& members);
  static Element from_mask(std::size_t atoms, std::uint64_t mask);

  std::size_t size() const { return n_; }
  bool test(std::size_t atom) const { return (w_[atom >> 6] >> (atom & 63)) & 1U; }
  Element& set(std::size_t atom);
  Element& reset(std::size_t atom);

  std::size_t count() const;
  bool none() const;
  bool any() const { return !none(); }
  bool all() const;
  std::size_t first() const;  // lowest atom; size() when empty
  std::vector<std::size_t> atoms() const;
  std::uint64_t low_word() const { return w_[0]; }

  Element operator|(const Element& o) const;
  Element operator&(const Element& o) const;
  Element operator^(const Element& o) const;
  Element operator~() const;
  Element minus(const Element& o) const { return *this & ~o; }
  Element& operator|=(const Element& o);
  Element& operator&=(const Element& o);

  bool leq(const Element& o) const;
  bool disjoint(const Element& o) const;

  bool operator==(const Element& o) const = default;
  std::strong_ordering operator<=>(const Element& o) const;

  std::size_t hash() const;
  std::string to_string() const;
  // "{0,2}" -> element of the `atoms`-atom algebra; throws SyntaxError.
  static Element parse(std::string_view text, std::size_t atoms);

 private:
  void check_same(const Element& o) const;

  std::uint16_t n_ = 0;
  std::array<std::uint64_t, kMaxAtoms / 64> w_{};
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

// The complete Boolean algebra of all subsets of an atom set.
class FiniteCBA {
 public:
  FiniteCBA() = default;
  explicit FiniteCBA(std::size_t atom_count);

  std::size_t atom_count() const { return atoms_; }
  Element zero() const { return Element(atoms_); }
  Element one() const { return Element::full(atoms_); }
  Element atom(std::size_t k) const;
  Element element(std::initializer_list<std::size_t> members) const;
  Element parse(std::string_view text) const { return Element::parse(text, atoms_); }
  bool contains(const Element& e) const { return e.size() == atoms_; }

  Element join(std::span<const Element> xs) const;
  Element meet(std::span<const Element> xs) const;

  // Every element, in mask order. Only for atom_count <= 24.
  std::vector<Element> elements() const;
  std::size_t element_count_log2() const { return atoms_; }

  bool operator==(const FiniteCBA&) const = default;

 private:
  std::size_t atoms_ = 0;
};

// B restricted below a nonzero `support`, presented as its own algebra whose
// atoms are the atoms of `support` in increasing order.
class Relativization {
 public:
  Relativization(const FiniteCBA& parent, const Element& support);

  const FiniteCBA& algebra() const { return algebra_; }
  const Element& support() const { return support_; }
  std::size_t parent_atom(std::size_t local) const { return atoms_[local]; }
  // Local index of a parent atom below support.
  std::size_t local_atom(std::size_t parent) const;

  Element lower(const Element& parent_element) const;  // x |-> x & support
  Element lift(const Element& local) const;

 private:
  FiniteCBA algebra_;
  Element support_;
  std::vector<std::size_t> atoms_;
  std::vector<std::size_t> local_of_;
};

}  // namespace forcing
