#include "ordrecon/canonical.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "ordrecon/errors.hpp"

namespace ordrecon {

namespace {

using u128 = unsigned __int128;

int pair_count(int n) { return n * (n - 1) / 2; }

// Ordered partition of the ground set. Cells are bit masks; the order of the
// cells carries information, the order inside a cell does not.
struct Partition {
  int count = 0;
  std::array<Mask, kMaxElements> cells{};

  bool discrete(int n) const { return count == n; }
};

Partition initial_partition(const Poset& p) {
  const int n = p.size();
  const auto rp = rank_profile(p);
  std::array<std::array<int, 4>, kMaxElements> key{};
  std::vector<int> order(n);
  for (int x = 0; x < n; ++x) {
    key[x] = {rp.rank[x], rp.dual_rank[x], std::popcount(p.down_row(x)), std::popcount(p.up_row(x))};
    order[x] = x;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  Partition part;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || key[order[i]] != key[order[i - 1]]) ++part.count;
    part.cells[part.count - 1] |= Mask{1} << order[i];
  }
  return part;
}

// Splits cells by how many strict lower/upper neighbours each element has in
// every cell, until stable.
void refine(const Poset& p, Partition& part) {
  using Sig = std::array<std::uint16_t, kMaxElements>;
  std::array<Sig, kMaxElements> sig;
  std::array<int, kMaxElements> members;
  for (;;) {
    if (part.discrete(p.size())) return;
    Partition next;
    bool changed = false;
    for (int c = 0; c < part.count; ++c) {
      const Mask cell = part.cells[c];
      if (std::popcount(cell) == 1) {
        next.cells[next.count++] = cell;
        continue;
      }
      int m = 0;
      for (int x : ElemSet(cell)) {
        Sig& s = sig[x];
        for (int k = 0; k < part.count; ++k) {
          s[k] = static_cast<std::uint16_t>(std::popcount(p.down_row(x) & part.cells[k]) * 17 +
                                            std::popcount(p.up_row(x) & part.cells[k]));
        }
        members[m++] = x;
      }
      const int len = part.count;
      auto less = [&](int a, int b) {
        return std::lexicographical_compare(sig[a].begin(), sig[a].begin() + len, sig[b].begin(),
                                            sig[b].begin() + len);
      };
      std::sort(members.begin(), members.begin() + m, less);
      for (int i = 0; i < m; ++i) {
        if (i == 0 || less(members[i - 1], members[i])) {
          if (i > 0) changed = true;
          ++next.count;
          next.cells[next.count - 1] = 0;
        }
        next.cells[next.count - 1] |= Mask{1} << members[i];
      }
    }
    part = next;
    if (!changed) return;
  }
}

Partition individualize(const Partition& part, int cell, int v) {
  Partition out;
  for (int c = 0; c < part.count; ++c) {
    if (c == cell) {
      out.cells[out.count++] = Mask{1} << v;
      out.cells[out.count++] = part.cells[c] & ~(Mask{1} << v);
    } else {
      out.cells[out.count++] = part.cells[c];
    }
  }
  return out;
}

u128 leaf_bits(const Poset& p, const std::array<int, kMaxElements>& lab) {
  const int n = p.size();
  u128 acc = 0;
  for (int i = 0; i < n; ++i) {
    const Mask row = p.up_row(lab[i]);
    for (int j = i + 1; j < n; ++j) acc = (acc << 1) | ((row >> lab[j]) & 1U);
  }
  return acc;
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Poset& p) : p_(p), n_(p.size()) {
    for (int x = 0; x < n_; ++x) {
      for (int y = x + 1; y < n_; ++y) {
        if (p.up_row(x) == p.up_row(y) && p.down_row(x) == p.down_row(y)) {
          Aut g;
          std::iota(g.begin(), g.end(), 0);
          std::swap(g[x], g[y]);
          auts_.push_back(g);
        }
      }
    }
  }

  CanonicalForm run() {
    Partition part = initial_partition(p_);
    search(part, 0);
    CanonicalForm out;
    out.cert.n = static_cast<std::uint8_t>(n_);
    const int m = pair_count(n_);
    u128 aligned = m == 0 ? 0 : best_ << (128 - m);
    out.cert.words[0] = static_cast<std::uint64_t>(aligned >> 64);
    out.cert.words[1] = static_cast<std::uint64_t>(aligned);
    out.labeling.assign(best_lab_.begin(), best_lab_.begin() + n_);
    return out;
  }

 private:
  using Aut = std::array<std::int8_t, kMaxElements>;
  static constexpr std::size_t kMaxAuts = 256;

  void search(Partition part, Mask fixed) {
    refine(p_, part);
    if (part.discrete(n_)) {
      leaf(part);
      return;
    }
    int target = 0;
    while (std::popcount(part.cells[target]) == 1) ++target;
    Mask tried = 0;
    for (int v : ElemSet(part.cells[target])) {
      if (tried != 0 && equivalent_to_tried(v, tried, fixed)) continue;
      tried |= Mask{1} << v;
      search(individualize(part, target, v), fixed | (Mask{1} << v));
    }
  }

  // True if an automorphism fixing `fixed` pointwise maps v into `tried`.
  bool equivalent_to_tried(int v, Mask tried, Mask fixed) const {
    std::array<int, kMaxElements> root;
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    bool any = false;
    for (const Aut& g : auts_) {
      bool keeps = true;
      for (int x : ElemSet(fixed)) {
        if (g[x] != x) {
          keeps = false;
          break;
        }
      }
      if (!keeps) continue;
      any = true;
      for (int x = 0; x < n_; ++x) {
        int a = find(x), b = find(g[x]);
        if (a != b) root[a] = b;
      }
    }
    if (!any) return false;
    const int rv = find(v);
    for (int t : ElemSet(tried)) {
      if (find(t) == rv) return true;
    }
    return false;
  }

  void leaf(const Partition& part) {
    std::array<int, kMaxElements> lab{};
    for (int i = 0; i < n_; ++i) lab[i] = std::countr_zero(part.cells[i]);
    const u128 bits = leaf_bits(p_, lab);
    if (!have_best_ || bits < best_) {
      have_best_ = true;
      best_ = bits;
      best_lab_ = lab;
    } else if (bits == best_ && auts_.size() < kMaxAuts) {
      Aut g;
      std::iota(g.begin(), g.end(), 0);
      bool identity = true;
      for (int i = 0; i < n_; ++i) {
        g[best_lab_[i]] = static_cast<std::int8_t>(lab[i]);
        identity = identity && best_lab_[i] == lab[i];
      }
      if (!identity) auts_.push_back(g);
    }
  }

  const Poset& p_;
  int n_;
  bool have_best_ = false;
  u128 best_ = 0;
  std::array<int, kMaxElements> best_lab_{};
  std::vector<Aut> auts_;
};

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool cert_bit(const CanonicalCert& c, int k) {
  return (c.words[k / 64] >> (63 - k % 64)) & 1U;
}

}  // namespace

std::string CanonicalCert::to_string() const {
  static constexpr char kHex[] = "0123456789abcdef";
  const int bytes = (pair_count(n) + 7) / 8;
  std::string out = std::to_string(n) + ":";
  for (int b = 0; b < bytes; ++b) {
    const std::uint64_t word = words[b / 8];
    const unsigned byte = static_cast<unsigned>((word >> (56 - 8 * (b % 8))) & 0xffU);
    out += kHex[byte >> 4];
    out += kHex[byte & 0xfU];
  }
  return out;
}

CanonicalCert CanonicalCert::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) throw ParseError("certificate lacks 'n:' prefix");
  int n = 0;
  for (char c : text.substr(0, colon)) {
    if (c < '0' || c > '9') throw ParseError("bad certificate size in '" + std::string(text) + "'");
    n = n * 10 + (c - '0');
    if (n > kMaxElements) throw ParseError("certificate size exceeds " + std::to_string(kMaxElements));
  }
  const std::string_view hex = text.substr(colon + 1);
  const int m = pair_count(n);
  const int bytes = (m + 7) / 8;
  if (static_cast<int>(hex.size()) != 2 * bytes) {
    throw ParseError("certificate '" + std::string(text) + "' has wrong length");
  }
  CanonicalCert c;
  c.n = static_cast<std::uint8_t>(n);
  for (int b = 0; b < bytes; ++b) {
    const int hi = hex_value(hex[2 * b]);
    const int lo = hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw ParseError("certificate '" + std::string(text) + "' is not lowercase hex");
    const std::uint64_t byte = static_cast<std::uint64_t>(hi * 16 + lo);
    c.words[b / 8] |= byte << (56 - 8 * (b % 8));
  }
  for (int k = m; k < 128; ++k) {
    if (cert_bit(c, k)) throw ParseError("certificate '" + std::string(text) + "' has nonzero padding");
  }
  return c;
}

std::uint64_t CanonicalCert::digest() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n;
  for (std::uint64_t w : words) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  return h;
}

CanonicalForm canonical_form(const Poset& p) {
  if (p.size() == 0) return CanonicalForm{};
  return Canonicalizer(p).run();
}

CanonicalCert canonical_cert(const Poset& p) { return canonical_form(p).cert; }

CanonicalCert canonical_cert(const Poset& p, ElemSet s) {
  return canonical_cert(induced(p, s, true));
}

Poset poset_from_cert(const CanonicalCert& cert) {
  const int n = cert.n;
  std::array<Mask, kMaxElements> rows{};
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (cert_bit(cert, k)) rows[i] |= Mask{1} << j;
    }
  }
  Poset p = Poset::from_up_rows(n, std::span<const Mask>(rows.data(), n));
  for (int i = 0; i < n; ++i) {
    if (p.up_row(i) != rows[i]) throw ParseError("certificate relation is not transitively closed");
  }
  return p;
}

bool is_isomorphism(const Poset& p, const Poset& q, const Morphism& m) {
  const int n = p.size();
  if (q.size() != n || static_cast<int>(m.size()) != n) return false;
  Mask seen = 0;
  for (int x = 0; x < n; ++x) {
    if (m[x] < 0 || m[x] >= n || ((seen >> m[x]) & 1U)) return false;
    seen |= Mask{1} << m[x];
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (p.less(x, y) != q.less(m[x], m[y])) return false;
    }
  }
  return true;
}

void for_each_isomorphism(const Poset& p, const Poset& q,
                          const std::function<bool(const Morphism&)>& fn) {
  const int n = p.size();
  if (q.size() != n || p.relation_count() != q.relation_count()) return;
  if (n == 0) {
    fn(Morphism{});
    return;
  }
  Partition pp = initial_partition(p);
  Partition pq = initial_partition(q);
  refine(p, pp);
  refine(q, pq);
  if (pp.count != pq.count) return;
  std::array<int, kMaxElements> cell_of{};
  for (int c = 0; c < pp.count; ++c) {
    if (std::popcount(pp.cells[c]) != std::popcount(pq.cells[c])) return;
    for (int x : ElemSet(pp.cells[c])) cell_of[x] = c;
  }
  // Assignment order: most comparabilities with already placed elements,
  // then smallest cell.
  std::vector<int> order;
  Mask placed = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    std::pair<int, int> best_key{-1, 0};
    for (int x = 0; x < n; ++x) {
      if ((placed >> x) & 1U) continue;
      std::pair<int, int> key{std::popcount((p.up_row(x) | p.down_row(x)) & placed),
                              -std::popcount(pp.cells[cell_of[x]])};
      if (key > best_key) {
        best_key = key;
        best = x;
      }
    }
    order.push_back(best);
    placed |= Mask{1} << best;
  }
  Morphism map(n, -1);
  Mask dom = 0;
  Mask img = 0;
  bool stop = false;
  auto image_of = [&](Mask s) {
    Mask out = 0;
    for (int x : ElemSet(s)) out |= Mask{1} << map[x];
    return out;
  };
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      if (!fn(map)) stop = true;
      return;
    }
    const int x = order[k];
    const Mask want_up = image_of(p.up_row(x) & dom);
    const Mask want_down = image_of(p.down_row(x) & dom);
    for (int y : ElemSet(pq.cells[cell_of[x]] & ~img)) {
      if ((q.up_row(y) & img) != want_up || (q.down_row(y) & img) != want_down) continue;
      map[x] = y;
      dom |= Mask{1} << x;
      img |= Mask{1} << y;
      self(self, k + 1);
      dom &= ~(Mask{1} << x);
      img &= ~(Mask{1} << y);
      map[x] = -1;
      if (stop) return;
    }
  };
  rec(rec, 0);
}

std::vector<Morphism> isomorphisms(const Poset& p, const Poset& q) {
  std::vector<Morphism> out;
  for_each_isomorphism(p, q, [&](const Morphism& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

bool are_isomorphic(const Poset& p, const Poset& q) {
  bool found = false;
  for_each_isomorphism(p, q, [&](const Morphism&) {
    found = true;
    return false;
  });
  return found;
}

std::vector<Morphism> automorphisms(const Poset& p) { return isomorphisms(p, p); }

bool is_rigid(const Poset& p) {
  int count = 0;
  for_each_isomorphism(p, p, [&](const Morphism&) { return ++count < 2; });
  return count == 1;
}

std::vector<Morphism> dual_automorphisms(const Poset& p) { return isomorphisms(p, dual(p)); }

long long count_subposets(const Poset& q, const Poset& p) {
  const int k = q.size();
  const int n = p.size();
  if (k > n) throw SizeError("subposet larger than host poset");
  if (k == 0) return 1;
  const int rel = q.relation_count();
  const bool chain = rel == pair_count(k);
  const bool antichain = rel == 0;
  const CanonicalCert target = (chain || antichain) ? CanonicalCert{} : canonical_cert(q);
  long long count = 0;
  const Mask limit = Mask{1} << n;
  for (Mask s = (Mask{1} << k) - 1; s < limit;) {
    int r = 0;
    for (int x : ElemSet(s)) r += std::popcount(p.up_row(x) & s);
    if (r == rel && (chain || antichain || canonical_cert(p, ElemSet(s)) == target)) ++count;
    const Mask c = s & (~s + 1);
    const Mask t = s + c;
    if (t == 0) break;
    s = (((t ^ s) >> 2) / c) | t;
  }
  return count;
}

}  // namespace ordrecon
