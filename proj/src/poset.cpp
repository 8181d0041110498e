#include "ordrecon/poset.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ordrecon/errors.hpp"

namespace ordrecon {

namespace {

void check_size(int n) {
  if (n < 0 || n > kMaxElements) {
    throw SizeError("poset size " + std::to_string(n) + " outside 0.." +
                    std::to_string(kMaxElements));
  }
}

void check_index(const Poset& p, int x) {
  if (x < 0 || x >= p.size()) {
    throw IndexError("element " + std::to_string(x) + " outside 0.." +
                     std::to_string(p.size() - 1));
  }
}

// Elements ordered by |down|, which is a linear extension.
std::vector<int> linear_extension(const Poset& p) {
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::popcount(p.down_row(a)) < std::popcount(p.down_row(b));
  });
  return order;
}

}  // namespace

std::string ElemSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int x : *this) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  out += '}';
  return out;
}

Poset Poset::from_up_rows(int n, std::span<const Mask> up_rows) {
  check_size(n);
  if (static_cast<int>(up_rows.size()) != n) throw SizeError("row count does not match n");
  const Mask all = ElemSet::full(n).bits();
  Poset p;
  p.n_ = n;
  for (int x = 0; x < n; ++x) {
    if (up_rows[x] & ~all) throw IndexError("relation row references element outside 0..n-1");
    p.up_[x] = up_rows[x];
  }
  for (int k = 0; k < n; ++k) {
    const Mask bit = Mask{1} << k;
    for (int i = 0; i < n; ++i) {
      if (p.up_[i] & bit) p.up_[i] |= p.up_[k];
    }
  }
  for (int x = 0; x < n; ++x) {
    if ((p.up_[x] >> x) & 1U) {
      throw CycleError("relation closes to a cycle through element " + std::to_string(x));
    }
  }
  p.rebuild_down();
  return p;
}

Poset Poset::from_closed_up_rows(int n, std::span<const Mask> up_rows) {
  Poset p;
  p.n_ = n;
  std::copy(up_rows.begin(), up_rows.begin() + n, p.up_.begin());
  p.rebuild_down();
#ifndef NDEBUG
  p.validate();
#endif
  return p;
}

Poset Poset::from_cover_pairs(int n, std::span<const std::pair<int, int>> pairs) {
  check_size(n);
  std::array<Mask, kMaxElements> rows{};
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw IndexError("pair (" + std::to_string(a) + "," + std::to_string(b) +
                       ") outside 0.." + std::to_string(n - 1));
    }
    if (a == b) throw CycleError("pair relates element " + std::to_string(a) + " to itself");
    rows[a] |= Mask{1} << b;
  }
  return from_up_rows(n, std::span<const Mask>(rows.data(), n));
}

Poset Poset::chain(int n) {
  check_size(n);
  std::array<Mask, kMaxElements> rows{};
  for (int x = 0; x < n; ++x) rows[x] = ElemSet::full(n).bits() & ~ElemSet::full(x + 1).bits();
  return from_closed_up_rows(n, std::span<const Mask>(rows.data(), n));
}

Poset Poset::antichain(int n) {
  check_size(n);
  Poset p;
  p.n_ = n;
  return p;
}

void Poset::rebuild_down() {
  down_.fill(0);
  for (int x = 0; x < n_; ++x) {
    for (int y : ElemSet(up_[x])) down_[y] |= Mask{1} << x;
  }
}

int Poset::relation_count() const {
  int total = 0;
  for (int x = 0; x < n_; ++x) total += std::popcount(up_[x]);
  return total;
}

ElemSet Poset::lower_covers(int x) const {
  Mask below = down_[x];
  Mask covers = below;
  for (int y : ElemSet(below)) covers &= ~down_[y];
  return ElemSet(covers);
}

ElemSet Poset::upper_covers(int x) const {
  Mask above = up_[x];
  Mask covers = above;
  for (int y : ElemSet(above)) covers &= ~up_[y];
  return ElemSet(covers);
}

void Poset::validate() const {
  for (int x = 0; x < n_; ++x) {
    if ((up_[x] >> x) & 1U) throw CycleError("relation is not irreflexive");
    for (int y : ElemSet(up_[x])) {
      if ((up_[y] >> x) & 1U) throw CycleError("relation is not antisymmetric");
      if (up_[y] & ~up_[x]) throw CycleError("relation is not transitive");
    }
  }
}

bool Poset::operator==(const Poset& other) const {
  if (n_ != other.n_) return false;
  return std::equal(up_.begin(), up_.begin() + n_, other.up_.begin());
}

ExtremalSets extremal_sets(const Poset& p) {
  ExtremalSets out;
  for (int x = 0; x < p.size(); ++x) {
    if (p.down_row(x) == 0) out.minimal = out.minimal.with(x);
    if (p.up_row(x) == 0) out.maximal = out.maximal.with(x);
  }
  out.extremal = out.minimal | out.maximal;
  return out;
}

RankProfile rank_profile(const Poset& p) {
  const int n = p.size();
  RankProfile rp;
  rp.rank.assign(n, 0);
  rp.dual_rank.assign(n, 0);
  const auto order = linear_extension(p);
  for (int x : order) {
    for (int y : p.below(x)) rp.rank[x] = std::max(rp.rank[x], rp.rank[y] + 1);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    for (int y : p.above(x)) rp.dual_rank[x] = std::max(rp.dual_rank[x], rp.dual_rank[y] + 1);
  }
  for (int x = 0; x < n; ++x) rp.height = std::max(rp.height, rp.rank[x]);
  return rp;
}

int height(const Poset& p) { return rank_profile(p).height; }

ElemSet down_set(const Poset& p, int x) {
  check_index(p, x);
  return p.below(x).with(x);
}

ElemSet up_set(const Poset& p, int x) {
  check_index(p, x);
  return p.above(x).with(x);
}

ElemSet neighborhood(const Poset& p, ElemSet a) {
  if (a.empty()) throw EmptySetError("neighborhood of the empty set");
  ElemSet out = a;
  for (int x : a) out |= p.above(x) | p.below(x);
  return out;
}

std::vector<ElemSet> components_within(const Poset& p, ElemSet within) {
  std::vector<ElemSet> out;
  ElemSet left = within;
  while (!left.empty()) {
    ElemSet comp = ElemSet::single(left.first());
    ElemSet frontier = comp;
    while (!frontier.empty()) {
      ElemSet next;
      for (int x : frontier) next |= p.above(x) | p.below(x);
      next &= within;
      next -= comp;
      comp |= next;
      frontier = next;
    }
    out.push_back(comp);
    left -= comp;
  }
  return out;
}

std::vector<ElemSet> components(const Poset& p) { return components_within(p, p.ground()); }

bool is_connected(const Poset& p) { return components(p).size() <= 1; }

Poset linear_sum(const Poset& lower, const Poset& upper) {
  const int a = lower.size();
  const int n = a + upper.size();
  check_size(n);
  std::array<Mask, kMaxElements> rows{};
  const Mask upper_block = ElemSet::full(n).bits() & ~ElemSet::full(a).bits();
  for (int x = 0; x < a; ++x) rows[x] = lower.up_row(x) | upper_block;
  for (int x = 0; x < upper.size(); ++x) rows[a + x] = upper.up_row(x) << a;
  return Poset::from_closed_up_rows(n, std::span<const Mask>(rows.data(), n));
}

std::vector<ElemSet> linear_summand_sets(const Poset& p) {
  // A cut between a prefix of a linear extension and the rest is a linear sum
  // split when every prefix element lies below every suffix element.
  std::vector<ElemSet> out;
  if (p.size() == 0) return out;
  const auto order = linear_extension(p);
  ElemSet prefix;
  ElemSet current;
  const ElemSet all = p.ground();
  for (int i = 0; i < p.size(); ++i) {
    prefix = prefix.with(order[i]);
    current = current.with(order[i]);
    if (i + 1 == p.size()) break;
    ElemSet suffix = all - prefix;
    bool split = true;
    for (int x : prefix) {
      if (!suffix.is_subset_of(p.above(x))) {
        split = false;
        break;
      }
    }
    if (split) {
      out.push_back(current);
      current = ElemSet();
    }
  }
  out.push_back(current);
  return out;
}

std::vector<Poset> linear_summands(const Poset& p) {
  std::vector<Poset> out;
  for (ElemSet s : linear_summand_sets(p)) out.push_back(induced(p, s));
  return out;
}

bool is_coconnected(const Poset& p) { return linear_summand_sets(p).size() <= 1; }

Poset dual(const Poset& p) {
  std::array<Mask, kMaxElements> rows{};
  for (int x = 0; x < p.size(); ++x) rows[x] = p.down_row(x);
  return Poset::from_closed_up_rows(p.size(), std::span<const Mask>(rows.data(), p.size()));
}

Poset induced(const Poset& p, ElemSet s, bool allow_empty) {
  if (s.empty() && !allow_empty) throw EmptySetError("induced subposet on the empty set");
  if (!s.is_subset_of(p.ground())) throw IndexError("subset " + s.to_string() + " outside ground set");
  std::array<int, kMaxElements> pos{};
  int m = 0;
  for (int x : s) pos[x] = m++;
  std::array<Mask, kMaxElements> rows{};
  int i = 0;
  for (int x : s) {
    Mask r = 0;
    for (int y : ElemSet(p.up_row(x) & s.bits())) r |= Mask{1} << pos[y];
    rows[i++] = r;
  }
  return Poset::from_closed_up_rows(m, std::span<const Mask>(rows.data(), m));
}

Poset remove_point(const Poset& p, int x) {
  check_index(p, x);
  return induced(p, p.ground().without(x), true);
}

Poset disjoint_union(const Poset& a, const Poset& b) {
  const int n = a.size() + b.size();
  check_size(n);
  std::array<Mask, kMaxElements> rows{};
  for (int x = 0; x < a.size(); ++x) rows[x] = a.up_row(x);
  for (int x = 0; x < b.size(); ++x) rows[a.size() + x] = b.up_row(x) << a.size();
  return Poset::from_closed_up_rows(n, std::span<const Mask>(rows.data(), n));
}

int longest_chain_through(const Poset& p, int x) {
  check_index(p, x);
  auto rp = rank_profile(p);
  return rp.rank[x] + rp.dual_rank[x];
}

int width(const Poset& p) {
  // Dilworth: width = n - maximum matching in the strict comparability
  // bipartite graph (x on the left, y on the right, edge when x < y).
  const int n = p.size();
  std::vector<int> match_right(n, -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, int x) -> bool {
    for (int y : p.above(x)) {
      if (seen[y]) continue;
      seen[y] = 1;
      if (match_right[y] < 0 || self(self, match_right[y])) {
        match_right[y] = x;
        return true;
      }
    }
    return false;
  };
  int matching = 0;
  for (int x = 0; x < n; ++x) {
    seen.assign(n, 0);
    if (augment(augment, x)) ++matching;
  }
  return n - matching;
}

bool is_irreducible(const Poset& p, int x) {
  check_index(p, x);
  return p.lower_covers(x).size() == 1 || p.upper_covers(x).size() == 1;
}

CutpointInfo cutpoint_queries(const Poset& p, int c) {
  check_index(p, c);
  CutpointInfo info;
  ElemSet home;
  for (ElemSet comp : components(p)) {
    if (comp.contains(c)) home = comp;
  }
  info.component_sets = components_within(p, home.without(c));
  info.is_cutpoint = info.component_sets.size() > 1;
  for (ElemSet s : info.component_sets) info.components.push_back(induced(p, s));
  return info;
}

std::vector<int> ideal_size_sequence(const Poset& p) {
  std::vector<int> out;
  for (int x = 0; x < p.size(); ++x) out.push_back(std::popcount(p.down_row(x)) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> filter_size_sequence(const Poset& p) {
  std::vector<int> out;
  for (int x = 0; x < p.size(); ++x) out.push_back(std::popcount(p.up_row(x)) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, int line_no) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                     std::string(s) + "'");
  }
  return value;
}

}  // namespace

Poset parse_poset_text(std::string_view text) {
  int n = -1;
  std::vector<std::pair<int, int>> pairs;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (n < 0) {
      n = parse_int(line, line_no);
      if (n < 0 || n > kMaxElements) {
        throw ParseError("line " + std::to_string(line_no) + ": size out of range");
      }
      continue;
    }
    auto lt = line.find('<');
    if (lt == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'a<b'");
    }
    pairs.emplace_back(parse_int(line.substr(0, lt), line_no), parse_int(line.substr(lt + 1), line_no));
  }
  if (n < 0) throw ParseError("missing element count");
  return Poset::from_cover_pairs(n, pairs);
}

std::string format_poset_text(const Poset& p) {
  std::ostringstream os;
  os << p.size() << '\n';
  for (int x = 0; x < p.size(); ++x) {
    for (int y : p.upper_covers(x)) os << x << '<' << y << '\n';
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poset& p) {
  os << "Poset(" << p.size() << ";";
  bool first = true;
  for (int x = 0; x < p.size(); ++x) {
    for (int y : p.upper_covers(x)) {
      os << (first ? " " : ", ") << x << '<' << y;
      first = false;
    }
  }
  return os << ')';
}

}  // namespace ordrecon
