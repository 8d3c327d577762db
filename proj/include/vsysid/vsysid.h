/* C interface to the vsysid library. Every function that can fail returns a
 * vsysid_status; on failure vsysid_last_error() holds a message for the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with vsysid_string_free. Handles are released with their _free
 * function; passing NULL to any _free function is a no-op. */
#ifndef VSYSID_VSYSID_H
#define VSYSID_VSYSID_H

#include <stddef.h>

#if defined(VSYSID_BUILDING_LIBRARY)
#define VSYSID_API __attribute__((visibility("default")))
#else
#define VSYSID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vsysid_status {
  VSYSID_OK = 0,
  VSYSID_E_DOMAIN = 1,
  VSYSID_E_BEHIND_CAMERA = 2,
  VSYSID_E_NO_INTERSECTION = 3,
  VSYSID_E_GENERATION = 4,
  VSYSID_E_PARSE = 5,
  VSYSID_E_SCHEMA = 6,
  VSYSID_E_DEGENERATE = 7,
  VSYSID_E_NO_VIABLE_TRACK = 8,
  VSYSID_E_INPUT = 9,
  VSYSID_E_IO = 10,
  VSYSID_E_INVALID_ARGUMENT = 11,
  VSYSID_E_INTERNAL = 12
} vsysid_status;

typedef struct vsysid_tracks vsysid_tracks;
typedef struct vsysid_report vsysid_report;

VSYSID_API const char* vsysid_version(void);
VSYSID_API const char* vsysid_status_string(vsysid_status status);
VSYSID_API const char* vsysid_last_error(void);
VSYSID_API void vsysid_string_free(char* s);

/* Track sets in the tracks JSON format. */
VSYSID_API vsysid_status vsysid_tracks_load(const char* path, vsysid_tracks** out);
VSYSID_API vsysid_status vsysid_tracks_parse(const char* json, vsysid_tracks** out);
VSYSID_API vsysid_status vsysid_tracks_save(const vsysid_tracks* tracks, const char* path);
VSYSID_API vsysid_status vsysid_tracks_to_json(const vsysid_tracks* tracks, char** out);
VSYSID_API size_t vsysid_tracks_count(const vsysid_tracks* tracks);
VSYSID_API vsysid_status vsysid_tracks_filter(const vsysid_tracks* tracks, double min_len_frac,
                                              double min_stddev_px, vsysid_tracks** out);
VSYSID_API void vsysid_tracks_free(vsysid_tracks* tracks);

/* Scene configs for a named preset (ball, ball-clean, spiral, breathing,
 * raster), as a JSON array. */
VSYSID_API vsysid_status vsysid_corpus_config(const char* preset, int count, unsigned long long seed,
                                              char** out_json);

/* Generates every scene of a config document (object or array) into out_dir:
 * <id>.tracks.json, <id>.truth.json and, when rasterize is nonzero,
 * <id>.frames/frame_NNNN.pgm. out_manifest (nullable) receives the written
 * paths as JSON. */
VSYSID_API vsysid_status vsysid_generate(const char* config_json, const char* out_dir, int rasterize,
                                         char** out_manifest);

/* Grid seeding plus pyramidal Lucas-Kanade over a directory of PGM frames.
 * klt_json may be NULL for defaults. */
VSYSID_API vsysid_status vsysid_track_frames(const char* frames_dir, double fps, const char* klt_json,
                                             vsysid_tracks** out);

/* filter -> fit -> score -> select. pipeline_json and truth_json may be NULL;
 * with a truth document the report carries parameter errors. */
VSYSID_API vsysid_status vsysid_fit(const vsysid_tracks* tracks, const char* pipeline_json,
                                    const char* truth_json, const char* scene_id, vsysid_report** out);
VSYSID_API vsysid_status vsysid_report_load(const char* path, vsysid_report** out);
VSYSID_API vsysid_status vsysid_report_to_json(const vsysid_report* report, char** out);
VSYSID_API int vsysid_report_selected_track(const vsysid_report* report);
VSYSID_API double vsysid_report_mean_loglik(const vsysid_report* report);
/* Copies the selected fit's physical parameters; *eta_len receives the full
 * count even when eta_cap is smaller. */
VSYSID_API vsysid_status vsysid_report_eta(const vsysid_report* report, double* eta, size_t eta_cap,
                                           size_t* eta_len);
VSYSID_API void vsysid_report_free(vsysid_report* report);

/* Region-of-interest discovery; roi_json may be NULL for defaults. */
VSYSID_API vsysid_status vsysid_roi(const vsysid_tracks* tracks, const char* roi_json, char** out_json);

/* Aggregates *.report.json against *.truth.json. out_table (nullable)
 * receives a plain-text table. */
VSYSID_API vsysid_status vsysid_eval(const char* reports_dir, const char* truths_dir, char** out_json,
                                     char** out_table);

/* Selected-track keypoints as [{frame_index, x, y[, frame]}]. */
VSYSID_API vsysid_status vsysid_export_labels(const vsysid_report* report, const char* frames_dir,
                                              char** out_json);

/* SVG and CSV files; out_files (nullable) receives the written paths. */
VSYSID_API vsysid_status vsysid_plot_report(const vsysid_report* report, const char* out_dir, char** out_files);
VSYSID_API vsysid_status vsysid_plot_roi(const char* roi_json, const vsysid_tracks* tracks, const char* out_dir,
                                         char** out_files);

#ifdef __cplusplus
}
#endif

#endif
