#include <stdio.h>
#include "condmed.h"

int main(void) {
    const char *json =
        "{\"candidates\": [0, 2, 6], \"agents\": ["
        "{\"x\": 1.001, \"f1\": true, \"f2\": false},"
        "{\"x\": 1.0, \"f1\": false, \"f2\": true},"
        "{\"x\": 3.001, \"f1\": false, \"f2\": true}]}";
    CmInstance *inst = NULL;
    if (cm_instance_from_json(json, &inst) != CM_STATUS_OK) {
        fprintf(stderr, "error: %s\n", cm_last_error_message());
        return 1;
    }
    CmOutcome out;
    if (cm_run_mechanism(inst, "conditional-median", &out) != CM_STATUS_OK) {
        fprintf(stderr, "error: %s\n", cm_last_error_message());
        cm_instance_free(inst);
        return 1;
    }
    CmRatio r;
    cm_approximation_ratio(inst, "conditional-median", CM_OBJECTIVE_MAX, &r);
    printf("facilities at (%g, %g), max-cost ratio %g\n", out.solution.y1, out.solution.y2, r.ratio);
    cm_instance_free(inst);
    return 0;
}
