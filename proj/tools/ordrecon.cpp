// Command-line front end. Talks to the library only through ordrecon.h.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "ordrecon/ordrecon.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct CliError {
  std::string message;
};

void check(int status) {
  if (status != ORDRECON_OK) {
    throw CliError{std::string(ordrecon_status_name(status)) + ": " + ordrecon_last_error()};
  }
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ordrecon_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError{"cannot write " + path};
}

// ORDRECON_CACHE wins over the flag.
std::string cache_dir(const std::string& flag) {
  const char* env = std::getenv("ORDRECON_CACHE");
  return env && *env ? env : flag;
}

using PosetPtr = std::unique_ptr<ordrecon_poset, decltype(&ordrecon_poset_free)>;
using DeckPtr = std::unique_ptr<ordrecon_deck, decltype(&ordrecon_deck_free)>;
using FindingsPtr = std::unique_ptr<ordrecon_findings, decltype(&ordrecon_findings_free)>;

DeckPtr load_deck(const std::string& path) {
  ordrecon_deck* d = nullptr;
  check(ordrecon_deck_parse(read_file(path).c_str(), &d));
  return DeckPtr(d, ordrecon_deck_free);
}

// Prints FAIL lines and writes the replay file when there is something to
// replay. Returns the exit code.
int report_findings(const FindingsPtr& f, const std::string& replay_path, bool verbose) {
  const size_t count = ordrecon_findings_count(f.get());
  for (size_t i = 0; i < count; ++i) {
    char* line = nullptr;
    check(ordrecon_findings_line(f.get(), i, &line));
    std::cout << take(line) << '\n';
    if (verbose) {
      char* diag = nullptr;
      check(ordrecon_findings_diagnostic(f.get(), i, &diag));
      std::cout << "  " << take(diag) << '\n';
    }
  }
  if (count == 0) return kExitOk;
  if (!replay_path.empty()) {
    char* json = nullptr;
    check(ordrecon_findings_json(f.get(), &json));
    write_file(replay_path, take(json));
    std::cerr << "replay file: " << replay_path << '\n';
  }
  return kExitFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deck reconstruction tools for finite ordered sets"};
  app.require_subcommand(1);

  int n = 0, max_n = 0, jobs = 1;
  std::string filter = "all", cache, property, poset_file, cert, deck_file, replay_out, replay_in;
  bool count_only = false, verbose = false;

  auto* en = app.add_subcommand("enumerate", "List certificates of all posets on n points");
  en->add_option("-n", n, "Number of points")->required();
  en->add_option("--filter", filter, "all | connected | connected-coconnected");
  en->add_option("--cache", cache, "Cache directory");
  en->add_option("--jobs", jobs, "Worker threads");
  en->add_flag("--count", count_only, "Print only the count");

  auto* ck = app.add_subcommand("check", "Run a property over the universe");
  ck->add_option("--property", property, "Property id, or 'all'")->required();
  ck->add_option("--max-n", max_n, "Largest size checked (default: the property's own cap)");
  ck->add_option("--jobs", jobs, "Worker threads");
  ck->add_option("--cache", cache, "Cache directory");
  ck->add_option("--replay-file", replay_out, "Where to write findings (default findings-<id>.json)");
  ck->add_flag("-v,--verbose", verbose, "Print diagnostics under each finding");

  auto* rp = app.add_subcommand("replay", "Re-run the findings stored in a replay file");
  rp->add_option("--file", replay_in, "Replay file")->required();
  rp->add_flag("-v,--verbose", verbose, "Print diagnostics under each finding");

  auto* dk = app.add_subcommand("deck", "Print the deck of a poset");
  auto* dk_file = dk->add_option("--poset", poset_file, "Poset file");
  dk->add_option("--cert", cert, "Poset certificate")->excludes(dk_file);

  auto* inv = app.add_subcommand("invert", "All posets with the given deck");
  inv->add_option("--deck", deck_file, "Deck file")->required();

  auto* fps = app.add_subcommand("find-pseudosimilar", "Connected posets with a minmax pair");
  fps->add_option("--max-n", max_n, "Largest size")->required();
  fps->add_option("--jobs", jobs, "Worker threads");

  auto* rc = app.add_subcommand("reconstruct", "Deck-only reconstruction report");
  rc->add_option("--deck", deck_file, "Deck file")->required();

  auto* cl = app.add_subcommand("classify", "Card tags with their justification");
  cl->add_option("--deck", deck_file, "Deck file")->required();

  auto* ls = app.add_subcommand("list", "List the property registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (en->parsed()) {
      char* out = nullptr;
      size_t count = 0;
      check(ordrecon_enumerate(n, filter.c_str(), cache_dir(cache).c_str(), jobs, &out, &count));
      const std::string text = take(out);
      if (count_only) {
        std::cout << count << '\n';
      } else {
        std::cout << text;
      }
      return kExitOk;
    }
    if (ck->parsed()) {
      std::vector<std::string> ids;
      if (property == "all") {
        for (size_t i = 0; i < ordrecon_property_count(); ++i) {
          const char* id = nullptr;
          check(ordrecon_property_info(i, &id, nullptr, nullptr, nullptr, nullptr));
          ids.push_back(id);
        }
      } else {
        ids.push_back(property);
      }
      int code = kExitOk;
      for (const std::string& id : ids) {
        int cap = max_n;
        if (cap <= 0) {
          for (size_t i = 0; i < ordrecon_property_count(); ++i) {
            const char* pid = nullptr;
            int def = 0;
            check(ordrecon_property_info(i, &pid, nullptr, nullptr, nullptr, &def));
            if (id == pid) cap = def;
          }
          if (cap <= 0) cap = 8;
        }
        ordrecon_findings* raw = nullptr;
        check(ordrecon_check(id.c_str(), cap, jobs, cache_dir(cache).c_str(), &raw));
        FindingsPtr f(raw, ordrecon_findings_free);
        const std::string path = replay_out.empty() || ids.size() > 1 ? "findings-" + id + ".json" : replay_out;
        if (report_findings(f, path, verbose) != kExitOk) code = kExitFindings;
        std::cerr << id << " max_n=" << cap << " findings=" << ordrecon_findings_count(f.get()) << '\n';
      }
      return code;
    }
    if (rp->parsed()) {
      ordrecon_findings* raw = nullptr;
      check(ordrecon_replay(read_file(replay_in).c_str(), &raw));
      return report_findings(FindingsPtr(raw, ordrecon_findings_free), "", verbose);
    }
    if (dk->parsed()) {
      ordrecon_poset* raw = nullptr;
      if (!cert.empty()) {
        check(ordrecon_poset_from_cert(cert.c_str(), &raw));
      } else if (!poset_file.empty()) {
        check(ordrecon_poset_parse(read_file(poset_file).c_str(), &raw));
      } else {
        throw CliError{"deck needs --poset or --cert"};
      }
      PosetPtr p(raw, ordrecon_poset_free);
      ordrecon_deck* d = nullptr;
      check(ordrecon_deck_of(p.get(), &d));
      DeckPtr dp(d, ordrecon_deck_free);
      char* text = nullptr;
      check(ordrecon_deck_format(dp.get(), &text));
      std::cout << take(text);
      return kExitOk;
    }
    if (inv->parsed()) {
      char* out = nullptr;
      check(ordrecon_deck_invert(load_deck(deck_file).get(), &out));
      std::cout << take(out);
      return kExitOk;
    }
    if (fps->parsed()) {
      char* out = nullptr;
      check(ordrecon_find_pseudosimilar(max_n, jobs, &out));
      std::cout << take(out);
      return kExitOk;
    }
    if (rc->parsed()) {
      char* out = nullptr;
      check(ordrecon_reconstruct(load_deck(deck_file).get(), &out));
      std::cout << take(out);
      return kExitOk;
    }
    if (cl->parsed()) {
      char* out = nullptr;
      check(ordrecon_classify(load_deck(deck_file).get(), &out));
      std::cout << take(out);
      return kExitOk;
    }
    if (ls->parsed()) {
      for (size_t i = 0; i < ordrecon_property_count(); ++i) {
        const char *id = nullptr, *anchor = nullptr, *universe = nullptr;
        int lo = 0, hi = 0;
        check(ordrecon_property_info(i, &id, &anchor, &universe, &lo, &hi));
        std::cout << id << "\tn=" << lo << ".." << hi << "\t" << universe << "\t" << anchor << '\n';
      }
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitError;
  }
  return kExitError;
}
