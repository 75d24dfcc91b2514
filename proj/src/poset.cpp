#include "linext/poset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace linext {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

void check_ids(const RawRelations& raw) {
  if (raw.n < 1) throw InputError("n must be at least 1");
  for (const auto& [a, b] : raw.pairs) {
    if (a < 1 || a > raw.n || b < 1 || b > raw.n) {
      throw InputError("element id out of range in relation " + std::to_string(a) +
                       "<" + std::to_string(b));
    }
  }
}

RawRelations parse_edge_list(std::string_view text) {
  RawRelations raw;
  bool have_n = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find_first_of(";\n", start);
    if (end == std::string_view::npos) end = text.size();
    auto entry = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = entry.find('#'); hash != std::string_view::npos) {
      entry = entry.substr(0, hash);
    }
    entry = trim(entry);
    if (entry.empty()) continue;

    if (!have_n) {
      if (entry.substr(0, 1) != "n" || entry.find('=') == std::string_view::npos) {
        throw InputError("edge list must start with 'n=<int>'");
      }
      raw.n = parse_int(entry.substr(entry.find('=') + 1), "element count");
      have_n = true;
      continue;
    }
    const auto lt = entry.find('<');
    if (lt == std::string_view::npos) {
      throw InputError("expected 'a<b', got '" + std::string(entry) + "'");
    }
    raw.pairs.emplace_back(parse_int(entry.substr(0, lt), "element id"),
                           parse_int(entry.substr(lt + 1), "element id"));
  }
  if (!have_n) throw InputError("missing 'n=<int>' header");
  check_ids(raw);
  return raw;
}

RawRelations parse_structured(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed structured poset: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer()) {
    throw InputError("structured poset needs an integer field 'n'");
  }
  RawRelations raw;
  raw.n = doc["n"].get<int>();
  if (doc.contains("relations")) {
    const auto& rel = doc["relations"];
    if (!rel.is_array()) throw InputError("'relations' must be an array");
    for (const auto& pair : rel) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        throw InputError("each relation must be a 2-element integer array");
      }
      raw.pairs.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  }
  check_ids(raw);
  return raw;
}

}  // namespace

PosetFormat detect_format(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    return PosetFormat::structured;
  }
  return PosetFormat::edge_list;
}

RawRelations parse_poset(std::string_view text, PosetFormat format) {
  return format == PosetFormat::structured ? parse_structured(text)
                                           : parse_edge_list(text);
}

Poset::Poset(const Poset& other)
    : n_(other.n_), closure_(other.closure_), queries_(other.query_count()) {}

Poset& Poset::operator=(const Poset& other) {
  if (this != &other) {
    n_ = other.n_;
    closure_ = other.closure_;
    queries_.store(other.query_count(), std::memory_order_relaxed);
  }
  return *this;
}

bool Poset::precedes(int a, int b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) {
    throw std::out_of_range("precedes: element id out of range");
  }
  queries_.fetch_add(1, std::memory_order_relaxed);
  return related(a, b);
}

bool Poset::is_canonical() const {
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b <= a; ++b) {
      if (related(a, b)) return false;
    }
  }
  return true;
}

std::string Poset::digest() const {
  // FNV-1a over n and the closure bits.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int shift = 0; shift < 32; shift += 8) mix((static_cast<unsigned>(n_) >> shift) & 0xff);
  for (auto bit : closure_) mix(bit);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Poset close_transitively(const RawRelations& raw) {
  check_ids(raw);
  Poset p;
  p.n_ = raw.n;
  const auto n = static_cast<std::size_t>(raw.n);
  p.closure_.assign(n * n, 0);
  for (const auto& [a, b] : raw.pairs) {
    p.closure_[(a - 1) * n + (b - 1)] = 1;
  }
  // Warshall.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.closure_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        p.closure_[i * n + j] |= p.closure_[k * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p.closure_[i * n + i]) {
      throw InputError("not a partial order: cycle through element " + std::to_string(i + 1));
    }
  }
  return p;
}

Permutation Relabeling::to_original(std::span<const int> canonical_perm) const {
  Permutation out(canonical_perm.size());
  for (std::size_t i = 0; i < canonical_perm.size(); ++i) {
    out[i] = canonical_to_original.at(static_cast<std::size_t>(canonical_perm[i]));
  }
  return out;
}

CanonicalPoset canonicalize(const Poset& poset) {
  const int n = poset.size();
  std::vector<int> indegree(n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (poset.related(a, b)) ++indegree[b];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  Relabeling rl;
  rl.original_to_canonical.assign(n, -1);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    rl.original_to_canonical[v] = static_cast<int>(rl.canonical_to_original.size());
    rl.canonical_to_original.push_back(v);
    for (int b = 0; b < n; ++b) {
      if (poset.related(v, b) && --indegree[b] == 0) ready.push(b);
    }
  }

  CanonicalPoset out;
  out.poset.n_ = n;
  out.poset.closure_.assign(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out.poset.closure_[static_cast<std::size_t>(a) * n + b] =
          poset.related(rl.canonical_to_original[a], rl.canonical_to_original[b]);
    }
  }
  out.relabeling = std::move(rl);
  return out;
}

bool is_permutation_of_n(std::span<const int> sigma, int n) {
  if (static_cast<int>(sigma.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : sigma) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool is_linear_extension(const Poset& poset, std::span<const int> sigma) {
  const int n = poset.size();
  if (!is_permutation_of_n(sigma, n)) {
    throw InputError("is_linear_extension: not a permutation of the ground set");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (poset.related(sigma[j], sigma[i])) return false;
    }
  }
  return true;
}

Permutation identity_permutation(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

CanonicalPoset load_poset(std::string_view text) {
  return canonicalize(close_transitively(parse_poset(text, detect_format(text))));
}

namespace families {

Poset chain(int n) {
  RawRelations raw{n, {}};
  for (int i = 1; i < n; ++i) raw.pairs.emplace_back(i, i + 1);
  return close_transitively(raw);
}

Poset antichain(int n) { return close_transitively(RawRelations{n, {}}); }

Poset grid(int rows, int cols) {
  // Element (r, c) gets id r * cols + c + 1; ordered by the product order.
  RawRelations raw{rows * cols, {}};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c + 1;
      if (c + 1 < cols) raw.pairs.emplace_back(id, id + 1);
      if (r + 1 < rows) raw.pairs.emplace_back(id, id + cols);
    }
  }
  return close_transitively(raw);
}

Poset from_pairs(int n, std::initializer_list<std::pair<int, int>> pairs) {
  return close_transitively(RawRelations{n, {pairs.begin(), pairs.end()}});
}

}  // namespace families

}  // namespace linext
