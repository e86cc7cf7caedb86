/*
 * C API of the sketchdsm shared library. All objects are opaque handles
 * created and destroyed through these functions; every fallible call
 * returns a dsm_status, with dsm_last_error() holding a thread-local
 * description of the most recent failure.
 */
#ifndef DSM_C_H
#define DSM_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsm_status {
    DSM_OK = 0,
    DSM_ERROR = 1,                 /* unexpected failure */
    DSM_INVALID_ARGUMENT = 2,
    DSM_IO_ERROR = 3,
    DSM_DETECTION_INFEASIBLE = 4,
    DSM_INVALID_MODEL = 5
} dsm_status;

typedef struct dsm_config dsm_config;
typedef struct dsm_sketch dsm_sketch;
typedef struct dsm_sketch_list dsm_sketch_list;
typedef struct dsm_model dsm_model;
typedef struct dsm_edge_map dsm_edge_map;
typedef struct dsm_grouping dsm_grouping;
typedef struct dsm_train_result dsm_train_result;
typedef struct dsm_detection dsm_detection;

const char* dsm_version(void);
/* Message of the last failure on this thread; empty string if none. */
const char* dsm_last_error(void);

/* ---- configuration ---------------------------------------------------- */
dsm_status dsm_config_create(dsm_config** out);
dsm_status dsm_config_load(const char* path, dsm_config** out);
dsm_status dsm_config_save(const dsm_config* cfg, const char* path);
/* Dotted keys, e.g. dsm_config_set(cfg, "grouping.tau", "1800"). */
dsm_status dsm_config_set(dsm_config* cfg, const char* key, const char* value);
/* Copies the JSON-encoded value at the dotted key into buf. */
dsm_status dsm_config_get(const dsm_config* cfg, const char* key, char* buf, size_t buf_len);
void dsm_config_free(dsm_config* cfg);

/* ---- sketches ---------------------------------------------------------- */
dsm_status dsm_sketch_load(const char* path, dsm_sketch** out);
dsm_status dsm_sketch_save(const dsm_sketch* sk, const char* path);
dsm_status dsm_sketch_save_svg(const dsm_sketch* sk, const char* path, double stroke_width);
size_t dsm_sketch_stroke_count(const dsm_sketch* sk);
dsm_status dsm_sketch_flip_horizontal(const dsm_sketch* sk, dsm_sketch** out);
void dsm_sketch_free(dsm_sketch* sk);

dsm_status dsm_sketch_list_create(dsm_sketch_list** out);
/* The list copies the sketch; the caller keeps ownership of `sk`. */
dsm_status dsm_sketch_list_append(dsm_sketch_list* list, const dsm_sketch* sk);
size_t dsm_sketch_list_size(const dsm_sketch_list* list);
void dsm_sketch_list_free(dsm_sketch_list* list);

/* ---- stroke analysis ---------------------------------------------------
 * Writes the JSON report; when svg_dir is non-NULL also writes
 * histogram.svg, temporal.svg and order_<i>.svg into that directory. */
dsm_status dsm_analyze(const dsm_sketch_list* sketches, const dsm_config* cfg,
                       const char* json_out_path, const char* svg_dir);

/* ---- perceptual grouping ----------------------------------------------- */
dsm_status dsm_group(const dsm_sketch* sk, const dsm_config* cfg, dsm_grouping** out);
size_t dsm_grouping_count(const dsm_grouping* g);
/* {"<stroke_id>": group_id, ...} */
dsm_status dsm_grouping_save_json(const dsm_grouping* g, const char* path);
dsm_status dsm_grouping_save_svg(const dsm_grouping* g, const char* path, double stroke_width);
void dsm_grouping_free(dsm_grouping* g);

/* ---- training ----------------------------------------------------------- */
dsm_status dsm_train(const dsm_sketch_list* sketches, const dsm_config* cfg,
                     dsm_train_result** out);
dsm_status dsm_train_result_model(const dsm_train_result* t, dsm_model** out);
dsm_status dsm_train_result_save_records(const dsm_train_result* t, const char* path);
/* Grouping SVGs per iteration: <dir>/iter<k>_sketch<i>.svg */
dsm_status dsm_train_result_save_snapshots(const dsm_train_result* t, const char* dir,
                                           double stroke_width);
void dsm_train_result_free(dsm_train_result* t);

/* ---- models ------------------------------------------------------------- */
dsm_status dsm_model_load(const char* path, dsm_model** out);
dsm_status dsm_model_save(const dsm_model* m, const char* path);
size_t dsm_model_cluster_count(const dsm_model* m);
dsm_status dsm_model_save_montage_svg(const dsm_model* m, const char* path, double stroke_width);
void dsm_model_free(dsm_model* m);

/* ---- edge maps ----------------------------------------------------------
 * dsm_edge_map_from_image runs Sobel extraction on a grayscale image;
 * dsm_edge_map_from_edge_image treats the raster itself as an edge map
 * (pixel > threshold). threshold < 0 uses the config default. */
dsm_status dsm_edge_map_from_image(const char* path, double threshold, dsm_edge_map** out);
dsm_status dsm_edge_map_from_edge_image(const char* path, double threshold, dsm_edge_map** out);
dsm_status dsm_edge_map_load_json(const char* path, dsm_edge_map** out);
dsm_status dsm_edge_map_from_sketch(const dsm_sketch* sk, dsm_edge_map** out);
size_t dsm_edge_map_point_count(const dsm_edge_map* em);
void dsm_edge_map_free(dsm_edge_map* em);

/* ---- detection / synthesis ----------------------------------------------
 * bbox is {x, y, w, h} in image pixels or NULL for the whole image. */
dsm_status dsm_synthesize(const dsm_model* m, const dsm_edge_map* em, const double* bbox,
                          const dsm_config* cfg, dsm_detection** out);
double dsm_detection_energy(const dsm_detection* d);
dsm_status dsm_detection_save_json(const dsm_detection* d, const char* path);
/* The placed exemplars as a sketch in image coordinates. */
dsm_status dsm_detection_to_sketch(const dsm_detection* d, dsm_sketch** out);
/* Placed strokes over the edge points, in image coordinates. */
dsm_status dsm_detection_save_overlay_svg(const dsm_detection* d, const dsm_edge_map* em,
                                          const char* path, double stroke_width);
void dsm_detection_free(dsm_detection* d);

#ifdef __cplusplus
}
#endif

#endif /* DSM_C_H */
