/* Public C interface to the telic typechecker library.
 *
 * All functions return a status code (see TELIC_SAT etc.). String outputs
 * are heap-allocated by the library and must be released with
 * telic_string_free. A session handle carries the last error message.
 */
#ifndef TELIC_TELIC_H
#define TELIC_TELIC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct telic_session telic_session;

/* Status codes double as process exit codes. */
#define TELIC_SAT 0
#define TELIC_UNSAT 1
#define TELIC_UNKNOWN 2
#define TELIC_USAGE 3

/* Type systems. */
#define TELIC_STLC 0
#define TELIC_HM 1

/* Root telescope start for the HM system. */
#define TELIC_START_MONO 0
#define TELIC_START_POLY 1

/* Output formats. */
#define TELIC_TEXT 0
#define TELIC_JSON 1
#define TELIC_DOT 2

telic_session* telic_session_new(void);
void telic_session_free(telic_session* s);

/* Message for the most recent failing call on this session, or "". The
 * pointer is owned by the session and valid until the next call. */
const char* telic_last_error(const telic_session* s);

void telic_string_free(char* s);

/* Each call writes its report to *out (and, when the trace flag is set and
 * out_trace is non-null, the solver trace to *out_trace). ctx may be NULL
 * or "" for an empty context. */

int telic_infer(telic_session* s, const char* term, const char* ctx,
                int system, int start, int format, int trace, char** out,
                char** out_trace);

int telic_check(telic_session* s, const char* term, const char* ctx,
                const char* expected, int system, int format, int trace,
                char** out, char** out_trace);

int telic_free_vars(telic_session* s, const char* term, const char* ctx,
                    int system, int format, char** out);

int telic_tree(telic_session* s, const char* term, const char* ctx, int system,
               int start, int lift, int format, char** out);

int telic_flat(telic_session* s, const char* term, int system, int format,
               char** out);

/* mode: NULL or "" for the full report, else a pattern like "+ + -". */
int telic_modes(telic_session* s, const char* mode, int system, int format,
                char** out);

int telic_fuzz(telic_session* s, uint64_t seed, int count, int format,
               char** out);

#ifdef __cplusplus
}
#endif

#endif /* TELIC_TELIC_H */
