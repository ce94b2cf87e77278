#include <stdio.h>
#include "ribvol.h"
int main(void) {
  char *s = NULL;
  if (ribvol_zeval(1, "6", "6", &s) != RIBVOL_STATUS_OK) return 1;
  printf("%s\n", s);
  ribvol_string_free(s);
  if (ribvol_fpoly_string(0, 1, &s) != RIBVOL_STATUS_INVALID_INPUT) return 1;
  printf("%s\n", ribvol_last_error());
  return 0;
}
