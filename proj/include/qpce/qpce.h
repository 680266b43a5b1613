/* C interface to the private-comparison protocol simulator.
 *
 * Every entry point takes a JSON request string and produces an opaque
 * result handle carrying a JSON report and a human-readable rendering.
 * Status codes equal the CLI exit codes, so front ends can pass them
 * straight through.
 */

#ifndef QPCE_H
#define QPCE_H

#if defined(_WIN32)
#if defined(QPCE_BUILD)
#define QPCE_API __declspec(dllexport)
#else
#define QPCE_API __declspec(dllimport)
#endif
#else
#define QPCE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum qpce_status {
    QPCE_OK = 0,
    QPCE_ERR_CONFIG = 1,        /* bad request; no result produced */
    QPCE_ABORTED_EAVESDROP = 2, /* run aborted by the decoy check; result set */
    QPCE_SCAN_MISMATCH = 3,     /* consistency scan found violating rows; result set */
    QPCE_ERR_INTERNAL = 4       /* invariant failure; no result produced */
};

typedef struct qpce_result qpce_result;

/* Execute one protocol run.
 * Request: {"variant":"aw|lwj11|lwg12", "x_hex":"..", "y_hex":"..", "bits":N,
 *           "mix":L, "decoys":D, "encoding":"isy|sx", "threshold":T,
 *           "seed":S, "adversary":"intercept_resend|tp_classical"?,
 *           "transcript":bool?}  */
QPCE_API int qpce_run(const char* request_json, qpce_result** out);

/* Exact enumeration of every reachable per-bit measurement case.
 * Request: {"encoding":"isy|sx", "variant":"aw"?}  */
QPCE_API int qpce_table1(const char* request_json, qpce_result** out);

/* Reduced states, discrimination bound, Monte Carlo leak estimate.
 * Request: {"resource":"w1|w1p|symw|epr", "encoding":"isy|sx", "trials":T,
 *           "seed":S}  */
QPCE_API int qpce_analyze(const char* request_json, qpce_result** out);

/* Attack batches.
 * Request: {"kind":"intercept_resend|tp_classical|dishonest", plus the
 *           run/analyze fields the kind needs, "runs":R?, "direction":
 *           "a_to_b|b_to_a|both"?}  */
QPCE_API int qpce_attack(const char* request_json, qpce_result** out);

/* Preparation-circuit description, replay verification and optionally the
 * Clifford reachability search.
 * Request: {"stabilizer_check":bool?}  */
QPCE_API int qpce_circuit(const char* request_json, qpce_result** out);

/* Valid until qpce_result_free. */
QPCE_API const char* qpce_result_json(const qpce_result* result);
QPCE_API const char* qpce_result_text(const qpce_result* result);
QPCE_API void qpce_result_free(qpce_result* result);

/* Message from the most recent failing call on this thread. */
QPCE_API const char* qpce_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* QPCE_H */
