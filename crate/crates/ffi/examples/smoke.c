#include <stdio.h>
#include "origami_kz.h"

int main(void) {
    OrigamiHandle *h = NULL;
    int32_t status = okz_parse("h=(1 2 4 7)(3 6 8 5); v=(1 3 4 8)(2 5 7 6)", &h);
    if (status != OKZ_OK) {
        fprintf(stderr, "parse: %s\n", okz_status_name(status));
        return 1;
    }
    int64_t num = 0, den = 0;
    uint64_t d = 0;
    if (okz_exact_sum(h, &num, &den) != OKZ_OK || okz_optimal_degree(h, &d) != OKZ_OK) {
        okz_free(h);
        return 1;
    }
    printf("sum=%lld/%lld d_opt=%llu\n", (long long)num, (long long)den, (unsigned long long)d);
    okz_free(h);
    return 0;
}
