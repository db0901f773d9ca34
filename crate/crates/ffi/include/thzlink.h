#ifndef THZLINK_H
#define THZLINK_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ThzStatus {
  THZ_STATUS_OK = 0,
  THZ_STATUS_NULL_POINTER = 1,
  THZ_STATUS_INVALID_ARGUMENT = 2,
  THZ_STATUS_CONFIG = 3,
  THZ_STATUS_RUNTIME = 4,
  THZ_STATUS_BUFFER_TOO_SMALL = 5,
  THZ_STATUS_PANIC = 6,
} ThzStatus;

typedef enum ThzCrc {
  THZ_CRC_NONE = 0,
  /**
   * 11-bit CRC, polynomial 0x621.
   */
  THZ_CRC_NR11 = 1,
  /**
   * 4-bit CRC, polynomial 0x3.
   */
  THZ_CRC_TEST4 = 2,
} ThzCrc;

typedef enum ThzDecoder {
  THZ_DECODER_SC = 0,
  THZ_DECODER_SCL = 1,
  THZ_DECODER_GRAND = 2,
  THZ_DECODER_ORBGRAND = 3,
} ThzDecoder;

typedef enum ThzDecodeStatus {
  THZ_DECODE_STATUS_DECODED = 0,
  THZ_DECODE_STATUS_ABANDONED_AT_BUDGET = 1,
  THZ_DECODE_STATUS_CRC_FAIL_ALL_PATHS = 2,
} ThzDecodeStatus;

/**
 * Opaque polar code handle.
 */
typedef struct ThzPolarCode ThzPolarCode;

/**
 * Opaque simulation handle holding a validated configuration.
 */
typedef struct ThzSimulation ThzSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *thz_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void thz_string_free(char *s);

/**
 * Thermal noise power `k_B T B` in watts.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `double`.
 */
enum ThzStatus thz_noise_power(double temperature_k, double bandwidth_hz, double *out);

/**
 * Amplitude path gain of subcarrier `l` (1-based).
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `double`.
 */
enum ThzStatus thz_path_gain(double carrier_freq_hz,
                             double bandwidth_hz,
                             uintptr_t num_subcarriers,
                             double distance_m,
                             double absorption_coeff_per_m,
                             uintptr_t l,
                             double *out);

/**
 * Builds an `(n, k)` polar code; `k` counts the CRC bits.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one pointer.
 */
enum ThzStatus thz_polar_code_new(uintptr_t n,
                                  uintptr_t k,
                                  enum ThzCrc crc,
                                  struct ThzPolarCode **out);

/**
 * # Safety
 * `code` must be NULL or a handle from [`thz_polar_code_new`], not yet freed.
 */
void thz_polar_code_free(struct ThzPolarCode *code);

/**
 * Block length, or 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uintptr_t thz_polar_code_n(const struct ThzPolarCode *code);

/**
 * Payload bits per codeword (`k` minus the CRC degree), or 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uintptr_t thz_polar_code_payload_len(const struct ThzPolarCode *code);

/**
 * Frozen mask as a hex string (free with [`thz_string_free`]), or NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
char *thz_polar_code_frozen_hex(const struct ThzPolarCode *code);

/**
 * Encodes `payload_len` payload bits (one per byte, 0 or 1) into `n` bytes at
 * `codeword`.
 *
 * # Safety
 * `payload` must point to `payload_len` readable bytes and `codeword` to
 * `codeword_len` writable bytes.
 */
enum ThzStatus thz_polar_code_encode(const struct ThzPolarCode *code,
                                     const uint8_t *payload,
                                     uintptr_t payload_len,
                                     uint8_t *codeword,
                                     uintptr_t codeword_len);

/**
 * Writes whether `word` (one bit per byte) is a codeword to `out`.
 *
 * # Safety
 * `word` must point to `len` readable bytes; `out` to one writable `bool`.
 */
enum ThzStatus thz_polar_code_is_codeword(const struct ThzPolarCode *code,
                                          const uint8_t *word,
                                          uintptr_t len,
                                          bool *out);

/**
 * Decodes `n` signed LLRs (positive favours 0). `param` is the list size for
 * SCL and the query budget for the GRAND decoders, ignored for SC; 0 picks
 * the default. The payload goes to `payload` and the decoder verdict to
 * `status`.
 *
 * # Safety
 * `llrs` must point to `len` readable doubles, `payload` to `payload_len`
 * writable bytes and `status` to one writable [`ThzDecodeStatus`].
 */
enum ThzStatus thz_polar_code_decode(const struct ThzPolarCode *code,
                                     const double *llrs,
                                     uintptr_t len,
                                     enum ThzDecoder decoder,
                                     uint64_t param,
                                     uint8_t *payload,
                                     uintptr_t payload_len,
                                     enum ThzDecodeStatus *status);

/**
 * Parses and validates a JSON simulation config.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must point to writable
 * memory for one pointer.
 */
enum ThzStatus thz_simulation_new(const char *json, struct ThzSimulation **out);

/**
 * # Safety
 * `sim` must be NULL or a handle from [`thz_simulation_new`], not yet freed.
 */
void thz_simulation_free(struct ThzSimulation *sim);

/**
 * Overrides the master seed.
 *
 * # Safety
 * `sim` must be NULL or a live handle.
 */
enum ThzStatus thz_simulation_set_seed(struct ThzSimulation *sim, uint64_t seed);

/**
 * Runs the sweep and hands back the CSV (free with [`thz_string_free`]).
 *
 * # Safety
 * `sim` must be a live handle; `csv_out` must point to writable memory for
 * one pointer.
 */
enum ThzStatus thz_simulation_run(const struct ThzSimulation *sim, char **csv_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THZLINK_H */
