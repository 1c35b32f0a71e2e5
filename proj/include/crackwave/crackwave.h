/* crackwave C interface.
 *
 * Every call returns a cw_status; on failure cw_last_error() holds a message for the calling
 * thread. Strings returned through char** are owned by the caller and released with
 * cw_string_free. Complex arrays are interleaved (re, im). */
#ifndef CRACKWAVE_H
#define CRACKWAVE_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef CW_BUILDING_LIBRARY
#    define CW_API __declspec(dllexport)
#  else
#    define CW_API __declspec(dllimport)
#  endif
#else
#  define CW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cw_status {
  CW_OK = 0,
  CW_ERR_INVALID_ARGUMENT = 1,
  CW_ERR_DOMAIN = 2,
  CW_ERR_VALIDATION = 3,
  CW_ERR_PARSE = 4,
  CW_ERR_PRECISION = 5,
  CW_ERR_NUMERICAL = 6,
  CW_ERR_IO = 7,
  CW_ERR_INTERNAL = 8
} cw_status;

typedef struct cw_mesh cw_mesh;
typedef struct cw_instance cw_instance;
typedef struct cw_eigenpair cw_eigenpair;
typedef struct cw_sweep cw_sweep;

CW_API const char* cw_version(void);
/* library versions the build was compiled against, as a JSON object */
CW_API const char* cw_build_info(void);
CW_API const char* cw_last_error(void);
CW_API const char* cw_status_name(cw_status s);
CW_API void cw_string_free(char* s);

/* special functions */
CW_API cw_status cw_sph_j(int l, double x, double* out);
CW_API cw_status cw_sph_dj(int l, double x, double* out);
/* first `count` positive zeros of d/dx j_l */
CW_API cw_status cw_zeros_of_dj(int l, int count, double* out);
/* out = {re H0, im H0, re H1, im H1} */
CW_API cw_status cw_hankel01(double x, double out[4]);
/* half-space Neumann Green function at wavenumber k0 * t */
CW_API cw_status cw_greens_halfspace(double k0, double t, const double x[3], const double y[3], double out[2]);

/* meshes */
CW_API cw_status cw_mesh_hemisphere(const double center[3], double radius, int upper, int n_refine, cw_mesh** out);
CW_API cw_status cw_mesh_planar(const double center[3], const double e1[3], const double e2[3], double a, double b,
                                int n1, int n2, cw_mesh** out);
CW_API cw_status cw_mesh_read(const char* path, cw_mesh** out);
CW_API cw_status cw_mesh_write(const cw_mesh* mesh, const char* path);
CW_API cw_status cw_mesh_counts(const cw_mesh* mesh, size_t* vertices, size_t* cells);
CW_API void cw_mesh_free(cw_mesh* mesh);

/* Double layer of a crack mesh with per-vertex density (2 * vertices doubles) at npts points
 * (3 * npts doubles). values gets 2 * npts doubles; gradients (may be NULL) 6 * npts. */
CW_API cw_status cw_eval_double_layer(const cw_mesh* mesh, const double* density, double k0, double t,
                                      const double* pts, size_t npts, double* values, double* gradients);
/* Same, on an n x n top-plane grid over [-w, w]^2, formatted as CSV with gradients. */
CW_API cw_status cw_forward_mesh_csv(const cw_mesh* mesh, const double* density, double k0, double t, int grid_n,
                                     double half_width, char** csv);
/* Planar rectangular crack given as a JSON parameter object. */
CW_API cw_status cw_forward_planar_csv(const char* params_json, double k0, double t, int grid_n, double half_width,
                                       char** csv);

/* counterexample instances; k <= 0 selects the unit sphere */
CW_API cw_status cw_instance_sphere(int n_refine, double k, cw_instance** out);
CW_API cw_status cw_instance_cusp2d(double a, double h, cw_instance** out);
CW_API cw_status cw_instance_axisym(double h, int n_theta, cw_instance** out);
/* Computes both top fields on an n x n grid (n points for 2D) and the gap report. */
CW_API cw_status cw_instance_gap_json(cw_instance* inst, int grid_n, char** json);
/* CSV of the field of crack 1 or 2 from the last gap computation. */
CW_API cw_status cw_instance_top_field_csv(const cw_instance* inst, int which, char** csv);
/* Gap after scaling g2 by (1 + fraction) on one root cell family (sphere) or a segment range. */
CW_API cw_status cw_instance_perturbed_gap(const cw_instance* inst, int root_cell, double fraction, int grid_n,
                                           double* rel_gap_u);
CW_API void cw_instance_free(cw_instance* inst);

/* odd Neumann eigenpair of the half cusp domain, at h, h/2, h/4 */
CW_API cw_status cw_eigen_cusp(double a, double h, int axisymmetric, cw_eigenpair** out);
CW_API cw_status cw_eigenpair_mu2(const cw_eigenpair* e, double* mu2, double* err_estimate);
CW_API cw_status cw_eigenpair_json(const cw_eigenpair* e, char** json);
CW_API cw_status cw_eigenpair_decay_json(const cw_eigenpair* e, const double* radii, size_t nr, const double* alphas,
                                         size_t na, char** json);
CW_API void cw_eigenpair_free(cw_eigenpair* e);

/* Synthetic planar-crack round trip described by a JSON request; see README for keys. */
CW_API cw_status cw_invert_json(const char* request, char** result);

/* sphere-pair frequency sweep, radius 1 */
CW_API cw_status cw_sweep_sphere(double k0, int n_refine, double t_min, double t_max, double t_step, int grid_n,
                                 double half_width, int lmax, cw_sweep** out);
CW_API cw_status cw_sweep_csv(const cw_sweep* s, char** csv);
CW_API cw_status cw_sweep_json(const cw_sweep* s, char** json);
CW_API void cw_sweep_free(cw_sweep* s);

#ifdef __cplusplus
}
#endif

#endif
