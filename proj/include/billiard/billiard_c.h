/* C interface to the billiard library. All handles are opaque; every call returns a
   bl_status and leaves a message for bl_last_error() on failure. */
#ifndef BILLIARD_C_H
#define BILLIARD_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BILLIARD_BUILDING_DLL)
#    define BL_API __declspec(dllexport)
#  else
#    define BL_API __declspec(dllimport)
#  endif
#else
#  define BL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bl_status {
    BL_OK = 0,
    BL_INVALID_ARGUMENT = 1,
    BL_SELF_INTERSECTING = 2,
    BL_ANGLE_NOT_RATIONAL = 3,
    BL_ANGLE_MISMATCH = 4,
    BL_GRAZING_INCIDENCE = 5,
    BL_NO_INTERSECTION = 6,
    BL_ANGLES_DONT_SUM_TO_PI = 7,
    BL_ORBIT_OVERFLOW = 8,
    BL_NOT_CLOSED_AFTER_MAX_ITER = 9,
    BL_NON_INTEGER_GENUS = 10,
    BL_NOT_COPRIME = 11,
    BL_NOT_PERIODIC = 12,
    BL_BUNDLE_NOT_REGULAR = 13,
    BL_OUTSIDE_DOMAIN = 14,
    BL_NOT_COMMENSURATE = 15,
    BL_DEGENERATE_CHANNEL = 16,
    BL_PARITY_VIOLATION = 17,
    BL_GRID_TOO_COARSE = 18,
    BL_POINT_ON_PIECE_BOUNDARY = 19,
    BL_NO_CONVERGENCE = 20,
    BL_GRID_MISMATCH = 21,
    BL_INTERNAL = 22
} bl_status;

typedef enum bl_variant { BL_PLUS = 0, BL_MINUS = 1, BL_RUNNING = 2 } bl_variant;

typedef struct bl_polygon bl_polygon;
typedef struct bl_channel bl_channel;
typedef struct bl_field bl_field;
typedef struct bl_modes bl_modes;

BL_API const char* bl_status_name(bl_status status);
/* Message of the last failed call on this thread. */
BL_API const char* bl_last_error(void);
/* 0 selects the hardware concurrency. */
BL_API bl_status bl_set_threads(unsigned count);

/* Polygons. xy holds count (x, y) pairs. */
BL_API bl_status bl_polygon_create(const double* xy, size_t count, int allow_irrational, bl_polygon** out);
/* rectangle a b | lshape a b c d | triangle | pentagon | figure13A | figure16 | figure17 | figure18a | figure18b */
BL_API bl_status bl_polygon_preset(const char* name, const double* params, size_t count, bl_polygon** out);
BL_API void bl_polygon_destroy(bl_polygon* poly);
BL_API bl_status bl_polygon_size(const bl_polygon* poly, size_t* count);
BL_API bl_status bl_polygon_vertices(const bl_polygon* poly, double* xy, size_t capacity);
/* box = {xmin, ymin, xmax, ymax} */
BL_API bl_status bl_polygon_bounds(const bl_polygon* poly, double box[4]);

typedef struct bl_preset_info {
    int has_direction;
    double direction;
    int has_seed;
    int seed_side;
    double seed_offset;
    int has_half_period;
    double half_period;
    int has_lshape; /* lshape = {width, strip, column, height} */
    double lshape[4];
} bl_preset_info;

BL_API bl_status bl_polygon_preset_info(const bl_polygon* poly, bl_preset_info* info);

/* Skeletons. The report is JSON; length receives the size without the terminator. */
BL_API bl_status bl_skeleton_report(const bl_polygon* poly, double gamma, char* buffer, size_t capacity, size_t* length);
BL_API bl_status bl_genus(const bl_polygon* poly, double gamma, int* genus);
/* Checks `bundles` randomly chosen regular pieces of the skeleton bundles. */
BL_API bl_status bl_delta_check(const bl_polygon* poly, double gamma, int bundles, uint64_t seed, double* max_deviation,
                                int* checked);

typedef struct bl_channel_info {
    double D;
    double D_half;
    double w;
    double direction;
    int n_bundles;
    int reflections;
    int moebius;
    int ref_side;
} bl_channel_info;

/* seed_side < 0 picks the default seed. */
BL_API bl_status bl_channel_trace(const bl_polygon* poly, double gamma, int seed_side, double seed_offset, bl_channel** out);
BL_API bl_status bl_channel_rect(double a, double b, int p, int q, bl_channel** out);
BL_API bl_status bl_channel_info_get(const bl_channel* ch, bl_channel_info* info);
BL_API void bl_channel_destroy(bl_channel* ch);

typedef struct bl_level {
    char kind[32];
    int m;
    int n;
    double E;
    int degeneracy;
} bl_level;

/* Kinds and parameters: rect_generic a b | rect_bouncing a b | rect_channel a b p q |
   channel D_half w | degenerate a b p q | broken a b c d | superscar width strip column height |
   triangle_regular side | triangle_singular side | pentagon_gallery | pentagon_star |
   deformed_wide | deformed_narrow */
BL_API bl_status bl_spectrum(const char* kind, const double* params, size_t count, int m, int n, bl_level* out);
BL_API bl_status bl_channel_level(const bl_channel* ch, int m, int n, bl_level* out);

/* Field kinds take the parameters of bl_spectrum. For degenerate the variant picks the first
   (BL_PLUS) or second partner; for triangle_regular it picks the first or second solution. */
BL_API bl_status bl_field_create(const char* kind, const double* params, size_t count, int m, int n, bl_variant variant,
                                 bl_field** out);
BL_API bl_status bl_field_from_channel(const bl_polygon* poly, const bl_channel* ch, int m, int n, bl_variant variant,
                                       bl_field** out);
BL_API void bl_field_destroy(bl_field* field);
BL_API bl_status bl_field_energy(const bl_field* field, double* energy);
BL_API bl_status bl_field_eval(const bl_field* field, double x, double y, double* re, double* im);
/* Cell centers x0 + (i + 1/2) h; arrays hold nx * ny values, row-major from the bottom row. */
BL_API bl_status bl_field_sample(const bl_field* field, double x0, double y0, double h, int nx, int ny, double* re,
                                 double* im, unsigned char* mask, int* coarse);
BL_API bl_status bl_field_residuals(const bl_field* field, int boundary_samples, int interior_points, uint64_t seed,
                                    double* boundary, double* helmholtz);
/* Largest relative gradient jump over all piece boundaries; lines receives their number. */
BL_API bl_status bl_field_gradient_jump(const bl_field* field, int samples, double* max_jump, int* lines);

/* Finite-difference Dirichlet modes of -1/2 Laplacian. */
BL_API bl_status bl_modes_solve(const bl_polygon* poly, double h, int k, uint64_t seed, bl_modes** out);
BL_API void bl_modes_destroy(bl_modes* modes);
BL_API bl_status bl_modes_count(const bl_modes* modes, int* count);
BL_API bl_status bl_modes_value(const bl_modes* modes, int index, double* energy, double* residual);
/* Node lattice x0 + i h, y0 + j h. */
BL_API bl_status bl_modes_grid(const bl_modes* modes, double* x0, double* y0, double* h, int* nx, int* ny);
/* values receives nx * ny node samples, zero outside. */
BL_API bl_status bl_modes_vector(const bl_modes* modes, int index, double* values);
/* For each energy, the matched mode index or -1 and its relative error. */
BL_API bl_status bl_modes_match(const bl_modes* modes, const double* energies, size_t count, double tol_rel, int* index,
                                double* rel_error);
/* overlaps receives one value per mode. */
BL_API bl_status bl_modes_overlap(const bl_modes* modes, const bl_field* field, double* overlaps, int* participation,
                                  int* dominant, double* total);

#ifdef __cplusplus
}
#endif

#endif
