#include "endok.h"
#include <stdio.h>
#include <string.h>

static const char *SPEC =
    "{\"format\": \"endok-spec/1\", \"main\": \"T\","
    " \"algebras\": {\"T\": {\"family\": {\"upper_triangular\": {\"n\": 2}}}}}";

int main(void) {
    EndokAlgebra *t = NULL;
    if (endok_algebra_from_spec(SPEC, NULL, &t) != ENDOK_STATUS_OK) {
        fprintf(stderr, "load: %s\n", endok_last_error());
        return 1;
    }
    size_t rank = 0;
    EndokSettings s = endok_settings_default();
    if (endok_k0_rank(t, &s, &rank) != ENDOK_STATUS_OK || rank != 2) {
        fprintf(stderr, "rank %zu: %s\n", rank, endok_last_error());
        return 1;
    }
    char *json = NULL;
    EndokStatus st = endok_verify_ideal(t, "e11", "ideal-split-projective", &s, &json);
    if (st != ENDOK_STATUS_OK || strstr(json, "ConfirmsTheorem") == NULL) {
        fprintf(stderr, "verify %d\n", (int)st);
        return 1;
    }
    endok_string_free(json);
    endok_algebra_free(t);
    printf("ok %s\n", endok_version());
    return 0;
}
