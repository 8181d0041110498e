#ifndef ORDRECON_H
#define ORDRECON_H

#include <stddef.h>

#if defined(_WIN32)
#define ORDRECON_API __declspec(dllexport)
#else
#define ORDRECON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ordrecon_status {
  ORDRECON_OK = 0,
  ORDRECON_E_ARGUMENT = 1,
  ORDRECON_E_PARSE = 2,
  ORDRECON_E_SIZE = 3,
  ORDRECON_E_CYCLE = 4,
  ORDRECON_E_NOT_CONNECTED = 5,
  ORDRECON_E_NOT_COCONNECTED = 6,
  ORDRECON_E_NOT_DECOMPOSABLE = 7,
  ORDRECON_E_INCONSISTENT_DECK = 8,
  ORDRECON_E_AMBIGUOUS = 9,
  ORDRECON_E_PROCEDURE = 10,
  ORDRECON_E_CAP_EXCEEDED = 11,
  ORDRECON_E_UNKNOWN_PROPERTY = 12,
  ORDRECON_E_CACHE_CORRUPT = 13,
  ORDRECON_E_IO = 14,
  ORDRECON_E_INTERNAL = 99
} ordrecon_status;

typedef struct ordrecon_poset ordrecon_poset;
typedef struct ordrecon_deck ordrecon_deck;
typedef struct ordrecon_findings ordrecon_findings;

/* Message of the last failed call on this thread; never NULL. */
ORDRECON_API const char* ordrecon_last_error(void);
ORDRECON_API const char* ordrecon_status_name(int status);

/* Strings returned through char** are owned by the caller. */
ORDRECON_API void ordrecon_string_free(char* s);

/* Poset text: first line n, then one `a<b` pair per line. */
ORDRECON_API int ordrecon_poset_parse(const char* text, ordrecon_poset** out);
ORDRECON_API int ordrecon_poset_from_cert(const char* cert, ordrecon_poset** out);
ORDRECON_API void ordrecon_poset_free(ordrecon_poset* p);
ORDRECON_API int ordrecon_poset_size(const ordrecon_poset* p, int* out);
ORDRECON_API int ordrecon_poset_cert(const ordrecon_poset* p, char** out);
ORDRECON_API int ordrecon_poset_format(const ordrecon_poset* p, char** out);

ORDRECON_API int ordrecon_deck_of(const ordrecon_poset* p, ordrecon_deck** out);
/* Deck text: `deck n=<n>`, then `<multiplicity> <cert>` per line. */
ORDRECON_API int ordrecon_deck_parse(const char* text, ordrecon_deck** out);
ORDRECON_API void ordrecon_deck_free(ordrecon_deck* d);
ORDRECON_API int ordrecon_deck_format(const ordrecon_deck* d, char** out);
/* Certificates of every poset with this deck, one per line. */
ORDRECON_API int ordrecon_deck_invert(const ordrecon_deck* d, char** out);
ORDRECON_API int ordrecon_reconstruct(const ordrecon_deck* d, char** report);
ORDRECON_API int ordrecon_classify(const ordrecon_deck* d, char** report);

/* filter: "all", "connected" or "connected-coconnected". cache_dir may be
   NULL or empty. Certificates one per line. */
ORDRECON_API int ordrecon_enumerate(int n, const char* filter, const char* cache_dir, int jobs, char** out,
                                    size_t* count);
/* Connected posets with a minmax pair for 2 <= n <= max_n, with their pair. */
ORDRECON_API int ordrecon_find_pseudosimilar(int max_n, int jobs, char** out);

ORDRECON_API size_t ordrecon_property_count(void);
/* Borrowed strings, valid for the life of the process. */
ORDRECON_API int ordrecon_property_info(size_t index, const char** id, const char** anchor, const char** universe,
                                        int* min_n, int* default_max_n);
ORDRECON_API int ordrecon_check(const char* id, int max_n, int jobs, const char* cache_dir, ordrecon_findings** out);
/* Parses a replay file and re-runs each finding. */
ORDRECON_API int ordrecon_replay(const char* json, ordrecon_findings** still_failing);
ORDRECON_API void ordrecon_findings_free(ordrecon_findings* f);
ORDRECON_API size_t ordrecon_findings_count(const ordrecon_findings* f);
/* `FAIL <id> witnesses=<cert,...>`. */
ORDRECON_API int ordrecon_findings_line(const ordrecon_findings* f, size_t index, char** out);
ORDRECON_API int ordrecon_findings_diagnostic(const ordrecon_findings* f, size_t index, char** out);
ORDRECON_API int ordrecon_findings_json(const ordrecon_findings* f, char** out);

#ifdef __cplusplus
}
#endif

#endif
