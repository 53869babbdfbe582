/* cc examples/smoke.c -Iinclude -L../../target/release -l:libffbias_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "ffbias.h"

int main(void) {
    FfbCurve *curve = NULL;
    FfbTable *table = NULL;
    FfbLPolyInfo info;
    double ratios[6];
    uint32_t m = 0;
    double rhs = 0.0;

    if (ffb_curve_parse("q = 5\na = [0, 4*T+4, 0, T, 0]\n", &curve) != FFB_STATUS_OK ||
        ffb_table_new(curve, 0, &table) != FFB_STATUS_OK) {
        fprintf(stderr, "setup: %s\n", ffb_last_error());
        return 1;
    }
    if (ffb_lpoly_info(table, 1, 8, true, &info) != FFB_STATUS_OK) {
        fprintf(stderr, "lpoly: %s\n", ffb_last_error());
        return 1;
    }
    printf("degree %zu epsilon %d rank %u\n", info.degree, info.epsilon, info.rank);
    if (ffb_drh_ratios(table, 6, true, ratios, 6, &m, &rhs) != FFB_STATUS_OK) {
        fprintf(stderr, "drh: %s\n", ffb_last_error());
        return 1;
    }
    for (int d = 0; d < 6; d++)
        printf("d=%d ratio %.6f\n", d + 1, ratios[d]);
    ffb_table_free(table);
    ffb_curve_free(curve);
    return 0;
}
