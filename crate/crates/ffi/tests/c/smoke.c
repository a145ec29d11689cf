#include <stdio.h>
#include <string.h>
#include "mplkit.h"

int main(void) {
    MplIndex *k = NULL, *d = NULL;
    char *s = NULL;
    if (mpl_index_parse("1,1,2", &k) != MPL_STATUS_OK) return 1;
    if (mpl_index_dagger(k, &d) != MPL_STATUS_OK) return 2;
    if (mpl_index_to_string(d, &s) != MPL_STATUS_OK) return 3;
    printf("dagger %s\n", s);
    mpl_string_free(s);
    if (mpl_mzv(d, 20, &s) != MPL_STATUS_OK) return 4;
    printf("mzv %s\n", s);
    mpl_string_free(s);
    MplIndex *bad = NULL;
    if (mpl_index_parse("2,x", &bad) != MPL_STATUS_PARSE) return 5;
    printf("error %s\n", mpl_last_error());
    mpl_index_free(k);
    mpl_index_free(d);
    return 0;
}
