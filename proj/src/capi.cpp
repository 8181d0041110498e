#include "ordrecon/ordrecon.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "ordrecon/deck.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/properties.hpp"
#include "ordrecon/pseudo_similar.hpp"
#include "ordrecon/recon.hpp"

struct ordrecon_poset {
  ordrecon::Poset p;
};

struct ordrecon_deck {
  ordrecon::Deck d;
};

struct ordrecon_findings {
  std::vector<ordrecon::Finding> items;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Maps the library's exception types onto status codes.
template <class F>
int guarded(F&& body) {
  using namespace ordrecon;
  try {
    body();
    g_last_error.clear();
    return ORDRECON_OK;
  } catch (const ParseError& e) {
    return fail(ORDRECON_E_PARSE, e.what());
  } catch (const SizeError& e) {
    return fail(ORDRECON_E_SIZE, e.what());
  } catch (const IndexError& e) {
    return fail(ORDRECON_E_ARGUMENT, e.what());
  } catch (const CycleError& e) {
    return fail(ORDRECON_E_CYCLE, e.what());
  } catch (const NotConnectedError& e) {
    return fail(ORDRECON_E_NOT_CONNECTED, e.what());
  } catch (const NotCoconnectedError& e) {
    return fail(ORDRECON_E_NOT_COCONNECTED, e.what());
  } catch (const NotDecomposableError& e) {
    return fail(ORDRECON_E_NOT_DECOMPOSABLE, e.what());
  } catch (const InconsistentDeckError& e) {
    return fail(ORDRECON_E_INCONSISTENT_DECK, e.what());
  } catch (const AmbiguousParameterError& e) {
    return fail(ORDRECON_E_AMBIGUOUS, e.what());
  } catch (const ProcedureFailure& e) {
    return fail(ORDRECON_E_PROCEDURE, e.what());
  } catch (const CapExceededError& e) {
    return fail(ORDRECON_E_CAP_EXCEEDED, e.what());
  } catch (const UnknownPropertyError& e) {
    return fail(ORDRECON_E_UNKNOWN_PROPERTY, e.what());
  } catch (const CacheCorruptError& e) {
    return fail(ORDRECON_E_CACHE_CORRUPT, e.what());
  } catch (const std::exception& e) {
    return fail(ORDRECON_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ORDRECON_E_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string classify_text(const ordrecon::Deck& d) {
  using namespace ordrecon;
  std::ostringstream os;
  os << "classify n=" << d.n << '\n';
  for (const TaggedCard& t : nonextremal_rank_assignment(d)) {
    os << "card " << t.card.to_string() << " mult=" << t.multiplicity << " kind=" << to_string(t.kind);
    if (t.rank) os << " rank=" << *t.rank;
    os << " because=\"" << t.method << "\"\n";
  }
  for (const FilterShiftTag& t : classify_by_filter_shift(d)) {
    os << "filter-shift " << t.card.to_string() << " mult=" << t.multiplicity
       << (t.maximal ? " maximal because=\"filter deck is not the parent's minus one filter\"" : " unflagged")
       << '\n';
  }
  os << "dismantlable " << (recognize_dismantlable(d) ? "yes" : "no") << '\n';
  return os.str();
}

std::string pseudosimilar_text(int max_n, int jobs) {
  using namespace ordrecon;
  std::ostringstream os;
  std::vector<std::vector<CanonicalCert>> by_size(std::max(max_n + 1, 2));
  for (int n = 2; n <= max_n; ++n) {
    by_size[n] = n <= 9 ? ps_universe(n, jobs) : ps_universe_structural(n, by_size, jobs);
    os << "n=" << n << " count=" << by_size[n].size() << '\n';
    for (const CanonicalCert& c : by_size[n]) {
      const Poset p = poset_from_cert(c);
      const PsStructure ps = lh_decomposition(p, find_minmax_ps_pairs(p).front());
      bool rigid_cards = true;
      for (int a : ps.A_P) rigid_cards = rigid_cards && is_rigid(remove_point(p, a));
      os << "  " << c.to_string() << " l=" << ps.l << " h=" << ps.h << " v=" << ps.v
         << " large=" << large_components(p, ps, 0).size() << (rigid_cards ? "" : " nonrigid-card") << '\n';
    }
  }
  return os.str();
}

}  // namespace

extern "C" {

const char* ordrecon_last_error(void) { return g_last_error.c_str(); }

const char* ordrecon_status_name(int status) {
  switch (status) {
    case ORDRECON_OK: return "ok";
    case ORDRECON_E_ARGUMENT: return "argument";
    case ORDRECON_E_PARSE: return "parse";
    case ORDRECON_E_SIZE: return "size";
    case ORDRECON_E_CYCLE: return "cycle";
    case ORDRECON_E_NOT_CONNECTED: return "not-connected";
    case ORDRECON_E_NOT_COCONNECTED: return "not-coconnected";
    case ORDRECON_E_NOT_DECOMPOSABLE: return "not-decomposable";
    case ORDRECON_E_INCONSISTENT_DECK: return "inconsistent-deck";
    case ORDRECON_E_AMBIGUOUS: return "ambiguous";
    case ORDRECON_E_PROCEDURE: return "procedure-failure";
    case ORDRECON_E_CAP_EXCEEDED: return "cap-exceeded";
    case ORDRECON_E_UNKNOWN_PROPERTY: return "unknown-property";
    case ORDRECON_E_CACHE_CORRUPT: return "cache-corrupt";
    case ORDRECON_E_IO: return "io";
    default: return "internal";
  }
}

void ordrecon_string_free(char* s) { std::free(s); }

int ordrecon_poset_parse(const char* text, ordrecon_poset** out) {
  if (!text || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = new ordrecon_poset{ordrecon::parse_poset_text(text)}; });
}

int ordrecon_poset_from_cert(const char* cert, ordrecon_poset** out) {
  if (!cert || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new ordrecon_poset{ordrecon::poset_from_cert(ordrecon::CanonicalCert::parse(cert))};
  });
}

void ordrecon_poset_free(ordrecon_poset* p) { delete p; }

int ordrecon_poset_size(const ordrecon_poset* p, int* out) {
  if (!p || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  *out = p->p.size();
  return ORDRECON_OK;
}

int ordrecon_poset_cert(const ordrecon_poset* p, char** out) {
  if (!p || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(ordrecon::canonical_cert(p->p).to_string()); });
}

int ordrecon_poset_format(const ordrecon_poset* p, char** out) {
  if (!p || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(ordrecon::format_poset_text(p->p)); });
}

int ordrecon_deck_of(const ordrecon_poset* p, ordrecon_deck** out) {
  if (!p || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = new ordrecon_deck{ordrecon::deck(p->p)}; });
}

int ordrecon_deck_parse(const char* text, ordrecon_deck** out) {
  if (!text || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = new ordrecon_deck{ordrecon::parse_deck(text)}; });
}

void ordrecon_deck_free(ordrecon_deck* d) { delete d; }

int ordrecon_deck_format(const ordrecon_deck* d, char** out) {
  if (!d || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(ordrecon::format_deck(d->d)); });
}

int ordrecon_deck_invert(const ordrecon_deck* d, char** out) {
  if (!d || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] {
    std::string text;
    for (const ordrecon::Poset& p : ordrecon::invert_deck(d->d)) text += ordrecon::canonical_cert(p).to_string() + "\n";
    *out = dup(text);
  });
}

int ordrecon_reconstruct(const ordrecon_deck* d, char** report) {
  if (!d || !report) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *report = dup(ordrecon::format_recon_report(ordrecon::reconstruct_report(d->d))); });
}

int ordrecon_classify(const ordrecon_deck* d, char** report) {
  if (!d || !report) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *report = dup(classify_text(d->d)); });
}

int ordrecon_enumerate(int n, const char* filter, const char* cache_dir, int jobs, char** out, size_t* count) {
  if (!filter || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] {
    const auto u = ordrecon::enumerate_cached(n, ordrecon::parse_filter(filter), cache_dir ? cache_dir : "", jobs);
    std::string text;
    for (const auto& c : u.certs) text += c.to_string() + "\n";
    *out = dup(text);
    if (count) *count = u.certs.size();
  });
}

int ordrecon_find_pseudosimilar(int max_n, int jobs, char** out) {
  if (!out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  if (max_n < 2 || max_n > ordrecon::kMaxElements) return fail(ORDRECON_E_SIZE, "max_n out of range");
  return guarded([&] { *out = dup(pseudosimilar_text(max_n, jobs)); });
}

size_t ordrecon_property_count(void) { return ordrecon::property_registry().size(); }

int ordrecon_property_info(size_t index, const char** id, const char** anchor, const char** universe, int* min_n,
                           int* default_max_n) {
  const auto& reg = ordrecon::property_registry();
  if (index >= reg.size()) return fail(ORDRECON_E_ARGUMENT, "property index out of range");
  const auto& info = reg[index];
  if (id) *id = info.id.c_str();
  if (anchor) *anchor = info.anchor.c_str();
  if (universe) *universe = info.universe.c_str();
  if (min_n) *min_n = info.min_n;
  if (default_max_n) *default_max_n = info.default_max_n;
  return ORDRECON_OK;
}

int ordrecon_check(const char* id, int max_n, int jobs, const char* cache_dir, ordrecon_findings** out) {
  if (!id || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] {
    ordrecon::RunOptions opts;
    opts.jobs = jobs;
    opts.cache_dir = cache_dir ? cache_dir : "";
    *out = new ordrecon_findings{ordrecon::run_property(id, max_n, opts)};
  });
}

int ordrecon_replay(const char* json, ordrecon_findings** still_failing) {
  if (!json || !still_failing) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] {
    *still_failing = new ordrecon_findings{ordrecon::replay_findings(ordrecon::findings_from_json(json))};
  });
}

void ordrecon_findings_free(ordrecon_findings* f) { delete f; }

size_t ordrecon_findings_count(const ordrecon_findings* f) { return f ? f->items.size() : 0; }

int ordrecon_findings_line(const ordrecon_findings* f, size_t index, char** out) {
  if (!f || !out || index >= f->items.size()) return fail(ORDRECON_E_ARGUMENT, "bad findings index");
  return guarded([&] { *out = dup(ordrecon::format_finding(f->items[index])); });
}

int ordrecon_findings_diagnostic(const ordrecon_findings* f, size_t index, char** out) {
  if (!f || !out || index >= f->items.size()) return fail(ORDRECON_E_ARGUMENT, "bad findings index");
  return guarded([&] { *out = dup(f->items[index].diagnostic); });
}

int ordrecon_findings_json(const ordrecon_findings* f, char** out) {
  if (!f || !out) return fail(ORDRECON_E_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(ordrecon::findings_to_json(f->items)); });
}

}  // extern "C"
