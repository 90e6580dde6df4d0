/* The public header must compile as C and the library must link from C. */
#include <stdio.h>

#include "marklis/marklis.h"

int main(void) {
  mlis_derived_params d;
  mlis_word* w = NULL;
  const uint32_t letters[] = {1, 2, 1, 2, 2};
  size_t li = 0;
  if (mlis_derive((mlis_chain_params){0.5, 0.5}, &d) != MLIS_OK || d.sigma2 != 1.0) return 1;
  if (mlis_word_create(letters, 5, 2, &w) != MLIS_OK) return 1;
  if (mlis_lis_combinatorial(w, &li) != MLIS_OK || li != 4) return 1;
  mlis_word_destroy(w);
  if (mlis_derive((mlis_chain_params){2.0, 0.5}, &d) != MLIS_ERR_DOMAIN) return 1;
  printf("%s\n", mlis_last_error());
  return 0;
}
