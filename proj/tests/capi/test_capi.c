/* Exercises the C API from C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "iovsim/iovsim.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                               \
        }                                                             \
    } while (0)

static long file_lines(const char* path) {
    FILE* f = fopen(path, "rb");
    long n = 0;
    int c;
    if (!f) return -1;
    while ((c = fgetc(f)) != EOF)
        if (c == '\n') ++n;
    fclose(f);
    return n;
}

int main(int argc, char** argv) {
    const char* dir = argc > 1 ? argv[1] : ".";
    char csv[1024], trace[1024], bfo[1024];
    snprintf(csv, sizeof csv, "%s/capi_run.csv", dir);
    snprintf(trace, sizeof trace, "%s/capi_trace.jsonl", dir);
    snprintf(bfo, sizeof bfo, "%s/capi_bfo.csv", dir);

    EXPECT(strlen(iovsim_version()) > 0);

    iovsim_config* cfg = NULL;
    EXPECT(iovsim_config_from_json("{\"comm_count\": 3, \"bogus\": 1}", &cfg) == IOVSIM_ERR_CONFIG);
    EXPECT(cfg == NULL);
    EXPECT(strstr(iovsim_last_error(), "bogus") != NULL);
    EXPECT(iovsim_config_from_file("/nonexistent/config.json", &cfg) == IOVSIM_ERR_CONFIG);
    EXPECT(iovsim_config_from_json(NULL, &cfg) == IOVSIM_ERR_ARGUMENT);

    EXPECT(iovsim_config_from_json("{\"network\": {\"node_count\": 100, \"area_side\": 1000, \"radio_range\": 250},"
                                   " \"comm_count\": 40}",
                                   &cfg) == IOVSIM_OK);
    EXPECT(strlen(iovsim_last_error()) == 0);
    EXPECT(iovsim_config_set_seed(cfg, 3) == IOVSIM_OK);
    EXPECT(iovsim_config_set_attacks(cfg, 1) == IOVSIM_OK);

    iovsim_report_set* set = NULL;
    EXPECT(iovsim_run(cfg, trace, &set) == IOVSIM_OK);
    EXPECT(iovsim_report_count(set) == 1);
    iovsim_metrics m;
    EXPECT(iovsim_report_get(set, 0, &m) == IOVSIM_OK);
    EXPECT(strcmp(m.scenario, "attack") == 0);
    EXPECT(m.seed == 3);
    EXPECT(m.n_comms == 40);
    EXPECT(m.pdr_pct >= 0.0 && m.pdr_pct <= 100.0);
    EXPECT(m.avg_delay_ms > 0.0);
    EXPECT(fabs(m.avg_energy_mj * 40 - m.total_energy_mj) < 1e-6 * m.total_energy_mj);
    EXPECT(iovsim_report_get(set, 1, &m) == IOVSIM_ERR_ARGUMENT);
    EXPECT(iovsim_report_write_csv(set, csv) == IOVSIM_OK);
    EXPECT(file_lines(csv) == 2);
    EXPECT(file_lines(trace) > 40);
    EXPECT(iovsim_report_write_csv(set, "/nonexistent/dir/out.csv") == IOVSIM_ERR_IO);
    iovsim_report_free(set);

    {
        const uint64_t counts[] = {10, 20};
        const uint64_t seeds[] = {1, 2, 3};
        iovsim_report_set* grid = NULL;
        EXPECT(iovsim_sweep(cfg, counts, 2, seeds, 3, 4, &grid) == IOVSIM_OK);
        EXPECT(iovsim_report_count(grid) == 6);
        EXPECT(iovsim_report_get(grid, 4, &m) == IOVSIM_OK);
        EXPECT(m.n_comms == 20 && m.seed == 2);
        iovsim_report_free(grid);
        EXPECT(iovsim_sweep(cfg, counts, 0, seeds, 3, 1, &grid) == IOVSIM_ERR_ARGUMENT);
    }

    EXPECT(iovsim_config_set_comm_count(cfg, 0) == IOVSIM_OK);
    EXPECT(iovsim_run(cfg, NULL, &set) == IOVSIM_OK);
    EXPECT(iovsim_report_get(set, 0, &m) == IOVSIM_OK);
    EXPECT(m.n_comms == 0 && m.avg_delay_ms == 0.0);
    iovsim_report_free(set);

    EXPECT(iovsim_bfo_trace_csv(cfg, 200, bfo) == IOVSIM_OK);
    EXPECT(file_lines(bfo) == 31);
    EXPECT(iovsim_bfo_trace_csv(cfg, 1, bfo) == IOVSIM_ERR_ARGUMENT);

    iovsim_config_free(cfg);
    iovsim_config_free(NULL);
    iovsim_report_free(NULL);

    EXPECT(iovsim_config_default(&cfg) == IOVSIM_OK);
    iovsim_config_free(cfg);

    remove(csv);
    remove(trace);
    remove(bfo);
    if (failures) fprintf(stderr, "%d failures\n", failures);
    return failures ? 1 : 0;
}
