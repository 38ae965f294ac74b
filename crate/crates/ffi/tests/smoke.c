#include <stdio.h>
#include <string.h>

#include "metaplectic_ice.h"

#define CHECK(cond)                                                    \
    do {                                                               \
        if (!(cond)) {                                                 \
            const char *m = mice_last_error_message();                 \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,    \
                    #cond, m ? m : "no message");                      \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    MiceSystem *gd = NULL, *dg = NULL;
    MiceCoeff *zgd = NULL, *zdg = NULL, *parsed = NULL;
    char *text = NULL;
    bool equal = false;
    size_t failures = 99;

    CHECK(mice_system_two_row("{4,2,1}", "{4}", 6, MICE_ORDER_GAMMA_DELTA, 2, &gd) == MICE_STATUS_OK);
    CHECK(mice_system_two_row("{4,2,1}", "{4}", 6, MICE_ORDER_DELTA_GAMMA, 2, &dg) == MICE_STATUS_OK);
    CHECK(mice_partition_function(gd, MICE_METHOD_ENUMERATE, &zgd) == MICE_STATUS_OK);
    CHECK(mice_partition_function(dg, MICE_METHOD_TRANSFER, &zdg) == MICE_STATUS_OK);
    CHECK(mice_coeff_equal(zgd, zdg, &equal) == MICE_STATUS_OK && equal);

    CHECK(mice_coeff_to_string(zgd, &text) == MICE_STATUS_OK);
    CHECK(mice_coeff_parse(text, 2, 2, &parsed) == MICE_STATUS_OK);
    CHECK(mice_coeff_equal(parsed, zgd, &equal) == MICE_STATUS_OK && equal);
    mice_string_free(text);

    CHECK(mice_verify_ybe(MICE_ROW_DELTA, MICE_ROW_GAMMA, 2, &failures) == MICE_STATUS_OK);
    CHECK(failures == 0);
    CHECK(mice_verify_duality("3,2,0", 3, 2) == MICE_STATUS_OK);
    CHECK(mice_verify_duality("1,2", 2, 1) == MICE_STATUS_INVALID_ARGUMENT);
    CHECK(mice_last_error_message() != NULL);

    CHECK(mice_run_json("{\"command\": \"calibrate\"}", &text) == MICE_STATUS_OK);
    CHECK(strstr(text, "\"schema_version\": 1") != NULL);
    mice_string_free(text);

    mice_coeff_free(parsed);
    mice_coeff_free(zgd);
    mice_coeff_free(zdg);
    mice_system_free(gd);
    mice_system_free(dg);
    printf("ok %s\n", mice_version());
    return 0;
}
