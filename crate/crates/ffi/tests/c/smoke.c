#include <math.h>
#include <stdio.h>
#include "gbspec.h"

int main(void) {
    GbsSymbol *sym = NULL;
    if (gbs_symbol_new(GBS_SYMBOL_KIND_H, 2, GBS_FAMILY_POLYNOMIAL, 0.0, &sym) != GBS_STATUS_OK) {
        fprintf(stderr, "%s\n", gbs_last_error_message());
        return 1;
    }
    double v = 0.0;
    gbs_symbol_eval(sym, 0.0, &v);
    gbs_symbol_free(sym);
    if (fabs(v - 1.0) > 1e-14) {
        return 2;
    }
    if (gbs_symbol_new(GBS_SYMBOL_KIND_F, 3, GBS_FAMILY_TRIGONOMETRIC, 4.0, &sym) != GBS_STATUS_CONSTRAINT) {
        return 3;
    }
    printf("ok\n");
    return 0;
}
