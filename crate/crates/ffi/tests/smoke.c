#include <stdio.h>
#include <string.h>
#include "adicomp.h"

int main(void) {
    AdicompScenario *sc = NULL;
    AdicompReport *rep = NULL;
    if (adicomp_gallery_load("Z-at-2", &sc) != ADICOMP_STATUS_OK) return 10;
    if (adicomp_run(sc, 0, false, &rep) != ADICOMP_STATUS_OK) return 11;
    if (adicomp_report_task_count(rep) != 5) return 12;
    char *json = adicomp_report_json(rep);
    if (!json || !strstr(json, "\"schema_version\": 1")) return 13;
    adicomp_string_free(json);
    adicomp_report_free(rep);
    adicomp_scenario_free(sc);
    if (adicomp_scenario_parse("ring R = ZZ\nideal I = (2\n", &sc) != ADICOMP_STATUS_PARSE_ERROR) return 14;
    printf("%s\n", adicomp_last_error_message());
    return 0;
}
