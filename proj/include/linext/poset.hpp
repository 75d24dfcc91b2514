#ifndef LINEXT_POSET_HPP
#define LINEXT_POSET_HPP

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linext/errors.hpp"

namespace linext {

// Permutations list element ids by position. Internally both element ids
// and positions are 0-based; documents and reports use 1-based ids.
using Permutation = std::vector<int>;

// Declared relations as read from a document, 1-based, not yet closed.
struct RawRelations {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // (a, b) means a < b
};

enum class PosetFormat { edge_list, structured };

// Parses either "n=<int>" followed by "a<b" entries (newline or ';'
// separated, '#' starts a comment) or a JSON document
// {"n": <int>, "relations": [[a, b], ...]}.
RawRelations parse_poset(std::string_view text, PosetFormat format);

// Picks the structured format when the first non-blank character is '{'.
PosetFormat detect_format(std::string_view text);

struct CanonicalPoset;

class Poset {
 public:
  Poset() = default;
  Poset(const Poset& other);
  Poset& operator=(const Poset& other);

  int size() const { return n_; }

  // Counted order query: a strictly precedes b. Throws std::out_of_range.
  bool precedes(int a, int b) const;

  // Uncounted lookup for oracles, validation and relabeling.
  bool related(int a, int b) const {
    return closure_[static_cast<std::size_t>(a) * n_ + b] != 0;
  }

  std::uint64_t query_count() const {
    return queries_.load(std::memory_order_relaxed);
  }

  // True when a < b as integers whenever a precedes b.
  bool is_canonical() const;

  // Stable hex digest of (n, closure); used to tag reports.
  std::string digest() const;

  friend Poset close_transitively(const RawRelations& raw);
  friend CanonicalPoset canonicalize(const Poset& poset);

 private:
  int n_ = 0;
  std::vector<std::uint8_t> closure_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

// Computes the transitive closure of the declared pairs. Throws InputError
// on ids outside [1, n], n < 1, or a cycle ("not a partial order").
Poset close_transitively(const RawRelations& raw);

struct Relabeling {
  std::vector<int> original_to_canonical;
  std::vector<int> canonical_to_original;

  Permutation to_original(std::span<const int> canonical_perm) const;
};

struct CanonicalPoset {
  Poset poset;
  Relabeling relabeling;
};

// Relabels by a topological sort that repeatedly removes the minimal element
// with the smallest original id, so the identity is a linear extension.
CanonicalPoset canonicalize(const Poset& poset);

// True iff sigma never places an element after one it precedes. Throws
// InputError if sigma is not a permutation of [0, n).
bool is_linear_extension(const Poset& poset, std::span<const int> sigma);

bool is_permutation_of_n(std::span<const int> sigma, int n);

Permutation identity_permutation(int n);

// Convenience: parse, close and canonicalize in one go.
CanonicalPoset load_poset(std::string_view text);

// Small families used by tests, the bench and the acceptance suite.
namespace families {
Poset chain(int n);
Poset antichain(int n);
Poset grid(int rows, int cols);
Poset from_pairs(int n, std::initializer_list<std::pair<int, int>> pairs);
}  // namespace families

}  // namespace linext

#endif
