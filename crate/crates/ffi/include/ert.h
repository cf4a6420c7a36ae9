/* Copyright 2026 The ERT Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ERT_H
#define ERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Values 2 to 4 match the exit codes of the `ert` binary.
 */
typedef enum {
  ERT_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  ERT_STATUS_NULL_POINTER = 1,
  /*
   Invalid configuration, argument or precondition.
   */
  ERT_STATUS_INVALID_ARGUMENT = 2,
  /*
   The run would exceed its memory cap.
   */
  ERT_STATUS_RESOURCE_CAP = 3,
  /*
   Numerical failure: non-finite values or a failed decomposition.
   */
  ERT_STATUS_NUMERICAL = 4,
  /*
   A caller buffer is shorter than the data to copy.
   */
  ERT_STATUS_BUFFER_TOO_SMALL = 5,
  /*
   Internal panic; the message holds the payload when it is a string.
   */
  ERT_STATUS_PANIC = 6,
} ErtStatus;

/*
 A model plus the run configuration it was parsed from.
 */
typedef struct ErtModel ErtModel;

/*
 Sampled observable trajectories.
 */
typedef struct ErtSeries ErtSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *ert_version(void);

/*
 Message describing the last failure on this thread, or null when the
 last call succeeded. Valid until the next library call on this thread.
 */
const char *ert_last_error(void);

/*
 Parses a TOML run configuration (the format read by `ert run`) and
 builds its model. The `[solver]` table and `t_final` are optional here;
 they are only needed by [`ert_model_run`].

 # Safety
 `toml` must be null or a valid NUL-terminated string; `out` must be null
 or valid for writes.
 */
ErtStatus ert_model_from_toml(const char *toml, ErtModel **out);

/*
 Releases a model. Null is ignored.

 # Safety
 `model` must be null or a handle from [`ert_model_from_toml`] that has
 not been freed.
 */
void ert_model_free(ErtModel *model);

/*
 Hilbert-space dimension of the model.

 # Safety
 `model` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_model_dim(const ErtModel *model, size_t *out);

/*
 Runs the solver named in the model's configuration.

 # Safety
 `model` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_model_run(const ErtModel *model, ErtSeries **out);

/*
 Exact density-matrix evolution.

 # Safety
 `model` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_solve_exact(const ErtModel *model,
                          double dt,
                          double t_final,
                          size_t sample_every,
                          ErtSeries **out);

/*
 Rank-truncated ensemble evolution with trace renormalization.

 # Safety
 `model` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_solve_ert(const ErtModel *model,
                        size_t rank,
                        double dt,
                        double t_final,
                        size_t sample_every,
                        ErtSeries **out);

/*
 Quantum-jump Monte-Carlo average over `n_traj` trajectories.

 # Safety
 `model` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_solve_wmc(const ErtModel *model,
                        size_t n_traj,
                        uint64_t seed,
                        double dt,
                        double t_final,
                        size_t sample_every,
                        ErtSeries **out);

/*
 Releases a series. Null is ignored.

 # Safety
 `series` must be null or a live handle returned by this library.
 */
void ert_series_free(ErtSeries *series);

/*
 Number of samples.

 # Safety
 `series` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_series_len(const ErtSeries *series, size_t *out);

/*
 Number of observable channels.

 # Safety
 `series` must be a live handle or null; `out` must be null or valid for
 writes.
 */
ErtStatus ert_series_channel_count(const ErtSeries *series, size_t *out);

/*
 Name of channel `index`, or null when out of range. The string lives as
 long as the series.

 # Safety
 `series` must be a live handle or null.
 */
const char *ert_series_channel_name(const ErtSeries *series, size_t index);

/*
 Copies the sample times into `buf`, which must hold at least
 [`ert_series_len`] values.

 # Safety
 `series` must be a live handle or null; `buf` must be null or valid for
 `len` writes.
 */
ErtStatus ert_series_times(const ErtSeries *series, double *buf, size_t len);

/*
 Copies channel `index` into `buf`.

 # Safety
 `series` must be a live handle or null; `buf` must be null or valid for
 `len` writes.
 */
ErtStatus ert_series_channel(const ErtSeries *series, size_t index, double *buf, size_t len);

/*
 Integrated error of `approx` against `exact`, channels matched by name.

 # Safety
 Both series must be live handles or null; `out` must be null or valid
 for writes.
 */
ErtStatus ert_integrated_error(const ErtSeries *exact, const ErtSeries *approx, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERT_H */
