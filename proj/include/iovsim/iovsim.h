#ifndef IOVSIM_IOVSIM_H
#define IOVSIM_IOVSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(IOVSIM_BUILDING)
#define IOVSIM_API __attribute__((visibility("default")))
#else
#define IOVSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iovsim_status {
    IOVSIM_OK = 0,
    IOVSIM_ERR_CONFIG = 1,
    IOVSIM_ERR_IO = 2,
    IOVSIM_ERR_ARGUMENT = 3,
    IOVSIM_ERR_INTERNAL = 4
} iovsim_status;

typedef struct iovsim_config iovsim_config;
typedef struct iovsim_report_set iovsim_report_set;

typedef struct iovsim_metrics {
    char scenario[16];
    uint64_t seed;
    uint64_t n_comms;
    double avg_delay_ms;
    double avg_energy_mj;
    double avg_throughput_kbps;
    double pdr_pct;
    uint64_t drops;
    uint64_t route_failures;
    uint64_t main_chain_length;
    uint64_t active_segment_length;
    uint64_t rejected_blocks;
    double total_energy_mj;
} iovsim_metrics;

IOVSIM_API const char* iovsim_version(void);

/* Message for the last failing call on this thread; empty after success. */
IOVSIM_API const char* iovsim_last_error(void);

IOVSIM_API iovsim_status iovsim_config_default(iovsim_config** out);
IOVSIM_API iovsim_status iovsim_config_from_file(const char* path, iovsim_config** out);
IOVSIM_API iovsim_status iovsim_config_from_json(const char* json, iovsim_config** out);
IOVSIM_API void iovsim_config_free(iovsim_config* cfg);
IOVSIM_API iovsim_status iovsim_config_set_seed(iovsim_config* cfg, uint64_t seed);
IOVSIM_API iovsim_status iovsim_config_set_attacks(iovsim_config* cfg, int enabled);
IOVSIM_API iovsim_status iovsim_config_set_comm_count(iovsim_config* cfg, uint64_t count);

/* trace_path may be NULL; otherwise every processed event is written as JSONL. */
IOVSIM_API iovsim_status iovsim_run(const iovsim_config* cfg, const char* trace_path, iovsim_report_set** out);

/* Runs every (count, seed) pair, counts outer. */
IOVSIM_API iovsim_status iovsim_sweep(const iovsim_config* cfg, const uint64_t* counts, size_t n_counts,
                                      const uint64_t* seeds, size_t n_seeds, unsigned parallelism,
                                      iovsim_report_set** out);

IOVSIM_API size_t iovsim_report_count(const iovsim_report_set* set);
IOVSIM_API iovsim_status iovsim_report_get(const iovsim_report_set* set, size_t index, iovsim_metrics* out);
IOVSIM_API iovsim_status iovsim_report_write_csv(const iovsim_report_set* set, const char* path);
IOVSIM_API void iovsim_report_free(iovsim_report_set* set);

/* Optimizes the split of a chain_len-block chain and writes the per-iteration
   trace as CSV (iteration,best_fitness,split_point). */
IOVSIM_API iovsim_status iovsim_bfo_trace_csv(const iovsim_config* cfg, uint64_t chain_len, const char* path);

#ifdef __cplusplus
}
#endif

#endif
