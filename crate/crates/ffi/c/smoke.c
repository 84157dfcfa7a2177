/* Build: cargo build -p eqdomain-ffi --release
 *        cc c/smoke.c -Iinclude ../../target/release/libeqdomain_ffi.a -lpthread -ldl -lm -o smoke
 */
#include <stdio.h>
#include "eqdomain.h"

int main(void) {
    const uint32_t left_zero[] = {0, 0, 1, 1};
    EqdSemigroup *s = NULL;
    if (eqd_semigroup_new(2, left_zero, &s) != EQD_STATUS_OK) {
        fprintf(stderr, "error: %s\n", eqd_last_error());
        return 1;
    }

    char *report = NULL;
    bool ed = true;
    EqdStatus status = eqd_check_semigroup(s, 1000000, &report, &ed);
    if (status != EQD_STATUS_OK) {
        fprintf(stderr, "error: %s\n", eqd_last_error());
        eqd_semigroup_free(s);
        return 1;
    }
    printf("equational domain: %s\n%s\n", ed ? "yes" : "no", report);
    eqd_string_free(report);

    const uint32_t bad[] = {1, 1, 0, 0};
    EqdSemigroup *t = NULL;
    status = eqd_semigroup_new(2, bad, &t);
    printf("non-associative table -> status %d: %s\n", (int)status, eqd_last_error());

    eqd_semigroup_free(s);
    return ed ? 1 : 0;
}
