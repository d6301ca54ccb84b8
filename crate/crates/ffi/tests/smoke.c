#include <stdio.h>
#include <string.h>

#include "dnacrack.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  enum { W = 8, H = 8, N = W * H * 3 };
  uint8_t rgb[N], other[N], back[N];
  for (int i = 0; i < N; i++) {
    rgb[i] = (uint8_t)(i * 37 + 11);
    other[i] = (uint8_t)(i * 91 + 5);
  }

  DnacrackKey *key = NULL;
  CHECK(dnacrack_key_new(1, 7, 0.501, 3.81, 0.401, 3.68, &key) == DNACRACK_STATUS_OK);
  DnacrackKey *bad = NULL;
  CHECK(dnacrack_key_new(9, 7, 0.501, 3.81, 0.401, 3.68, &bad) == DNACRACK_STATUS_MALFORMED_KEY);
  CHECK(bad == NULL);

  DnacrackImage *plain = NULL, *second = NULL, *cipher = NULL, *cipher2 = NULL, *rec = NULL;
  CHECK(dnacrack_image_new(W, H, rgb, N, &plain) == DNACRACK_STATUS_OK);
  CHECK(dnacrack_image_new(W, H, other, N, &second) == DNACRACK_STATUS_OK);
  CHECK(dnacrack_encrypt(plain, key, &cipher) == DNACRACK_STATUS_OK);
  CHECK(dnacrack_encrypt(second, key, &cipher2) == DNACRACK_STATUS_OK);

  DnacrackEquivalentKey *ek = NULL;
  DnacrackAttackStage stage = DNACRACK_ATTACK_STAGE_NO_STEP1_WITNESS;
  CHECK(dnacrack_attack(plain, cipher, &ek, &stage) == DNACRACK_STATUS_OK);
  CHECK(stage == DNACRACK_ATTACK_STAGE_NONE);
  CHECK(dnacrack_eqkey_k1(ek) == 1);
  CHECK(dnacrack_eqkey_decrypt(ek, cipher2, &rec) == DNACRACK_STATUS_OK);
  CHECK(dnacrack_image_copy_rgb(rec, back, N) == DNACRACK_STATUS_OK);
  CHECK(memcmp(back, other, N) == 0);

  uint8_t *buf = NULL;
  uintptr_t len = 0;
  CHECK(dnacrack_image_to_ppm(cipher, &buf, &len) == DNACRACK_STATUS_OK);
  CHECK(len == 11 + N && memcmp(buf, "P6\n8 8\n255\n", 11) == 0);
  dnacrack_buffer_free(buf, len);

  CHECK(strcmp(dnacrack_status_message(DNACRACK_STATUS_OK), "ok") == 0);
  CHECK(dnacrack_image_width(NULL) == 0);

  dnacrack_image_free(rec);
  dnacrack_eqkey_free(ek);
  dnacrack_image_free(cipher2);
  dnacrack_image_free(cipher);
  dnacrack_image_free(second);
  dnacrack_image_free(plain);
  dnacrack_key_free(key);
  puts("smoke ok");
  return 0;
}
