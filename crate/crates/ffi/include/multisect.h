#ifndef MULTISECT_H
#define MULTISECT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Output rendering for [`msd_run`].
 */
typedef enum MsdFormat {
  MSD_FORMAT_TEXT = 0,
  MSD_FORMAT_JSON = 1,
} MsdFormat;

/**
 * Result of a library call. The nonzero codes for usage, parse, validation
 * and computation errors agree with the exit statuses of the command-line
 * tool.
 */
typedef enum MsdStatus {
  MSD_STATUS_OK = 0,
  MSD_STATUS_USAGE = 2,
  MSD_STATUS_PARSE = 3,
  MSD_STATUS_INVALID = 4,
  MSD_STATUS_COMPUTATION = 5,
  MSD_STATUS_NULL_ARGUMENT = 6,
  MSD_STATUS_UTF8 = 7,
  MSD_STATUS_PANIC = 8,
} MsdStatus;

/**
 * A parsed diagram file.
 */
typedef struct MsdDiagram MsdDiagram;

/**
 * Parses diagram text. On success `*out` receives a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_parse(const char *text, struct MsdDiagram **out);

/**
 * Reads and parses a diagram file. On success `*out` receives a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_read(const char *path, struct MsdDiagram **out);

/**
 * Releases a diagram handle. Null is ignored.
 *
 * # Safety
 * `diagram` must be null or a handle from this library not yet freed.
 */
void msd_diagram_free(struct MsdDiagram *diagram);

/**
 * Number of cut systems in the diagram, or 0 for a null handle.
 *
 * # Safety
 * `diagram` must be null or a live handle.
 */
size_t msd_diagram_sections(const struct MsdDiagram *diagram);

/**
 * Writes the diagram back out in the file format.
 *
 * # Safety
 * `diagram` must be a live handle and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_serialize(const struct MsdDiagram *diagram, char **out);

/**
 * Runs one of the command-line commands (`validate`, `homology`,
 * `rel-homology`, `twisted-homology`, `torsion`, `intersection-form`,
 * `monodromy`, `boundary`) on a diagram.
 *
 * `twist_override` and `variant` may be null. On success `*out` receives
 * the report, which the caller frees with [`msd_string_free`].
 *
 * # Safety
 * `diagram` must be a live handle, the string arguments NUL-terminated or
 * null where allowed, and `out` a valid pointer.
 */
enum MsdStatus msd_run(const struct MsdDiagram *diagram,
                       const char *command,
                       const char *twist_override,
                       const char *variant,
                       enum MsdFormat format,
                       char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void msd_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null if the last
 * call succeeded. The pointer stays valid until the next call on this
 * thread and must not be freed.
 */
const char *msd_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *msd_version(void);

#endif  /* MULTISECT_H */
