#ifndef QPW_QPW_H
#define QPW_QPW_H

/*
 * C interface to the quiver-with-potential workbench.
 *
 * Every document crossing this boundary is JSON text (UTF-8). Vertices are
 * 1-based. Functions returning char** hand over ownership: release with
 * qpw_string_free. On failure a function returns a non-zero qpw_status and
 * qpw_last_error() describes it; the message is per thread and stays valid
 * until the next call on that thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QPW_API __declspec(dllexport)
#else
#define QPW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpw_status {
    QPW_OK = 0,
    QPW_INVALID_ARGUMENT = 1,
    QPW_OUT_OF_RANGE = 2,
    QPW_NOT_SKEW_SYMMETRIC = 3,
    QPW_LOOP = 4,
    QPW_TWO_CYCLE = 5,
    QPW_DISCONNECTED = 6,
    QPW_BUDGET_EXCEEDED = 7,
    QPW_SIZE_GUARD = 8,
    QPW_INFEASIBLE = 9,
    QPW_VERIFICATION_FAILED = 10,
    QPW_NOT_FOUND = 11,
    QPW_DOMAIN = 12,
    QPW_INTERNAL = 13
} qpw_status;

QPW_API const char* qpw_version(void);
/* Stable identifier such as "two_cycle"; "ok" for QPW_OK. */
QPW_API const char* qpw_status_name(qpw_status status);
QPW_API const char* qpw_last_error(void);
QPW_API void qpw_string_free(char* s);

/* Opaque quiver with potential. */
typedef struct qpw_qp qpw_qp;

QPW_API qpw_status qpw_qp_parse(const char* qp_json, qpw_qp** out);
QPW_API void qpw_qp_free(qpw_qp* qp);
QPW_API qpw_status qpw_qp_to_json(const qpw_qp* qp, char** out);
QPW_API int qpw_qp_vertex_count(const qpw_qp* qp);
/* QP mutation at vertex k, followed by reduction. */
QPW_API qpw_status qpw_qp_mutate(const qpw_qp* qp, int k, qpw_qp** out);

/* Document-level operations; outputs are the CLI documents. */
QPW_API qpw_status qpw_mutate_json(const char* quiver_json, int k, char** out);
QPW_API qpw_status qpw_classify_json(const char* quiver_json, char** out);
QPW_API qpw_status qpw_qp_mutate_json(const char* qp_json, int k, char** out);
/* truncation <= 0 uses the document's truncation. */
QPW_API qpw_status qpw_jacobian_json(const char* qp_json, int truncation, char** out);
QPW_API qpw_status qpw_stable_json(const char* rep_json, const char* qp_json, const int* theta, size_t theta_len,
                                   char** out);
QPW_API qpw_status qpw_einv_json(const char* qp_json, const int* g, size_t g_len, int samples, uint64_t seed,
                                 char** out);

typedef void (*qpw_progress_fn)(const char* line, void* user);

typedef struct qpw_witness_options {
    int k;
    int probe_depth;
    int probe_trials;
    uint64_t seed;
    qpw_progress_fn progress; /* may be NULL */
    void* user;
} qpw_witness_options;

QPW_API void qpw_witness_options_init(qpw_witness_options* options);
/* options may be NULL for the defaults. */
QPW_API qpw_status qpw_witness_json(const char* qp_json, const qpw_witness_options* options, char** out);

/* Mutation sessions. state_dir may be NULL for an in-memory store. */
typedef struct qpw_session_store qpw_session_store;

QPW_API qpw_status qpw_session_store_open(const char* state_dir, qpw_session_store** out);
QPW_API void qpw_session_store_close(qpw_session_store* store);
QPW_API qpw_status qpw_session_create(qpw_session_store* store, const char* qp_json, char** out);
QPW_API qpw_status qpw_session_get(qpw_session_store* store, const char* id, char** out);
/* mode is "quiver" or "qp". */
QPW_API qpw_status qpw_session_mutate(qpw_session_store* store, const char* id, int k, const char* mode,
                                      char** out);
QPW_API qpw_status qpw_session_undo(qpw_session_store* store, const char* id, char** out);
QPW_API qpw_status qpw_session_redo(qpw_session_store* store, const char* id, char** out);

#ifdef __cplusplus
}
#endif

#endif
