#ifndef DNACRACK_H
#define DNACRACK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum DnacrackStatus {
  DNACRACK_STATUS_OK = 0,
  DNACRACK_STATUS_NULL_POINTER = 1,
  DNACRACK_STATUS_INVALID_ARGUMENT = 2,
  DNACRACK_STATUS_MALFORMED_IMAGE = 3,
  DNACRACK_STATUS_MALFORMED_KEY = 4,
  DNACRACK_STATUS_MALFORMED_EQUIVALENT_KEY = 5,
  DNACRACK_STATUS_GEOMETRY_MISMATCH = 6,
  DNACRACK_STATUS_ATTACK_FAILED = 7,
  DNACRACK_STATUS_INTERNAL = 8,
} DnacrackStatus;

// Which step of the known-plaintext attack found no witness.
typedef enum DnacrackAttackStage {
  DNACRACK_ATTACK_STAGE_NONE = 0,
  DNACRACK_ATTACK_STAGE_NO_STEP1_WITNESS = 1,
  DNACRACK_ATTACK_STAGE_NO_STEP2_WITNESS = 2,
  DNACRACK_ATTACK_STAGE_NO_STEP3_WITNESS = 3,
  DNACRACK_ATTACK_STAGE_INCONSISTENT_PAIR = 4,
} DnacrackAttackStage;

// An equivalent key recovered by the attack.
typedef struct DnacrackEquivalentKey DnacrackEquivalentKey;

// An RGB image.
typedef struct DnacrackImage DnacrackImage;

// A secret key.
typedef struct DnacrackKey DnacrackKey;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated description of `status`.
const char *dnacrack_status_message(enum DnacrackStatus status);

// Release a buffer returned by this library. Null is ignored.
//
// # Safety
// `data` and `len` must come from one earlier call of this library.
void dnacrack_buffer_free(uint8_t *data, uintptr_t len);

// Build an image from `width * height * 3` interleaved RGB bytes.
//
// # Safety
// `rgb` must point to `len` readable bytes.
enum DnacrackStatus dnacrack_image_new(uintptr_t width,
                                       uintptr_t height,
                                       const uint8_t *rgb,
                                       uintptr_t len,
                                       struct DnacrackImage **out);

// Parse a binary PPM (P6, maxval 255).
//
// # Safety
// `data` must point to `len` readable bytes.
enum DnacrackStatus dnacrack_image_from_ppm(const uint8_t *data,
                                            uintptr_t len,
                                            struct DnacrackImage **out);

// Serialize to a canonical PPM. Free the buffer with [`dnacrack_buffer_free`].
//
// # Safety
// `img` must be a live handle; `out` and `out_len` must be writable.
enum DnacrackStatus dnacrack_image_to_ppm(const struct DnacrackImage *img,
                                          uint8_t **out,
                                          uintptr_t *out_len);

// Width in pixels, or 0 for a null handle.
//
// # Safety
// `img` must be null or a live handle.
uintptr_t dnacrack_image_width(const struct DnacrackImage *img);

// Height in pixels, or 0 for a null handle.
//
// # Safety
// `img` must be null or a live handle.
uintptr_t dnacrack_image_height(const struct DnacrackImage *img);

// Copy the interleaved RGB bytes into `buf`, which must hold exactly
// `width * height * 3` bytes.
//
// # Safety
// `img` must be a live handle and `buf` must point to `len` writable bytes.
enum DnacrackStatus dnacrack_image_copy_rgb(const struct DnacrackImage *img,
                                            uint8_t *buf,
                                            uintptr_t len);

// # Safety
// `img` must be null or a handle not yet freed.
void dnacrack_image_free(struct DnacrackImage *img);

// Build a key from its six parameters.
//
// # Safety
// `out` must be writable.
enum DnacrackStatus dnacrack_key_new(uint8_t k1,
                                     uint8_t k2,
                                     double x0,
                                     double mu0,
                                     double x0p,
                                     double mu0p,
                                     struct DnacrackKey **out);

// Parse the text of a key file.
//
// # Safety
// `text` must be a NUL-terminated string.
enum DnacrackStatus dnacrack_key_parse(const char *text, struct DnacrackKey **out);

// # Safety
// `key` must be null or a handle not yet freed.
void dnacrack_key_free(struct DnacrackKey *key);

// # Safety
// `img` and `key` must be live handles; `out` must be writable.
enum DnacrackStatus dnacrack_encrypt(const struct DnacrackImage *img,
                                     const struct DnacrackKey *key,
                                     struct DnacrackImage **out);

// # Safety
// `img` and `key` must be live handles; `out` must be writable.
enum DnacrackStatus dnacrack_decrypt(const struct DnacrackImage *img,
                                     const struct DnacrackKey *key,
                                     struct DnacrackImage **out);

// Recover an equivalent key from a plain/cipher pair.
//
// Returns `ATTACK_FAILED` when a step has no witness and reports which one
// through `stage` (if non-null). On success `stage` is set to `NONE`.
//
// # Safety
// `plain` and `cipher` must be live handles; `out` must be writable and
// `stage` null or writable.
enum DnacrackStatus dnacrack_attack(const struct DnacrackImage *plain,
                                    const struct DnacrackImage *cipher,
                                    struct DnacrackEquivalentKey **out,
                                    enum DnacrackAttackStage *stage);

// # Safety
// `ek` and `cipher` must be live handles; `out` must be writable.
enum DnacrackStatus dnacrack_eqkey_decrypt(const struct DnacrackEquivalentKey *ek,
                                           const struct DnacrackImage *cipher,
                                           struct DnacrackImage **out);

// Serialize to the `EQK1` file format. Free the buffer with
// [`dnacrack_buffer_free`].
//
// # Safety
// `ek` must be a live handle; `out` and `out_len` must be writable.
enum DnacrackStatus dnacrack_eqkey_to_bytes(const struct DnacrackEquivalentKey *ek,
                                            uint8_t **out,
                                            uintptr_t *out_len);

// Parse the `EQK1` file format.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum DnacrackStatus dnacrack_eqkey_from_bytes(const uint8_t *data,
                                              uintptr_t len,
                                              struct DnacrackEquivalentKey **out);

// The recovered `k1` (1..=8), or 0 for a null handle.
//
// # Safety
// `ek` must be null or a live handle.
uint8_t dnacrack_eqkey_k1(const struct DnacrackEquivalentKey *ek);

// # Safety
// `ek` must be null or a handle not yet freed.
void dnacrack_eqkey_free(struct DnacrackEquivalentKey *ek);

// Ciphertext-only structure leak: writes 1 where the G and B digits of a
// position are equal, else 0. `buf` must hold `width * height * 4` bytes.
//
// # Safety
// `cipher` must be a live handle and `buf` must point to `len` writable bytes.
enum DnacrackStatus dnacrack_structure_leak(const struct DnacrackImage *cipher,
                                            uint8_t *buf,
                                            uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNACRACK_H */
