#ifndef UAG_H
#define UAG_H

/* C interface to the workbench. Strings returned through out-parameters are
 * owned by the caller and released with uag_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(UAG_BUILDING_LIBRARY)
#define UAG_API __attribute__((visibility("default")))
#else
#define UAG_API
#endif

typedef struct uag_workspace uag_workspace;

typedef enum uag_status {
  UAG_OK = 0,
  UAG_VIOLATION = 1, /* a checked property failed */
  UAG_USAGE = 2      /* bad arguments or input */
} uag_status;

typedef enum uag_error_code {
  UAG_E_NONE = 0,
  UAG_E_SYNTAX,
  UAG_E_SORT,
  UAG_E_ARITY,
  UAG_E_REFERENCE,
  UAG_E_CAP_EXCEEDED,
  UAG_E_NOT_CONGRUENCE,
  UAG_E_USAGE,
  UAG_E_INVALID,
  UAG_E_IO,
  UAG_E_INTERNAL
} uag_error_code;

UAG_API const char* uag_version(void);
UAG_API const char* uag_status_name(int status);
UAG_API const char* uag_error_name(uag_error_code code);

/* Returns NULL on allocation failure. The workspace starts with the built-in
 * signatures, algebras and contexts. */
UAG_API uag_workspace* uag_workspace_new(void);
UAG_API void uag_workspace_free(uag_workspace* ws);

/* On failure *diagnostic (if non-NULL) receives "kind: location: message".
 * A failed load leaves the workspace unchanged. */
UAG_API uag_error_code uag_workspace_load_file(uag_workspace* ws, const char* path, char** diagnostic);
UAG_API uag_error_code uag_workspace_load_text(uag_workspace* ws, const char* text, const char* source,
                                               char** diagnostic);

/* Runs one command line (argv excludes the program name). Returns the exit
 * status; *out and *err receive the streams, each possibly empty. */
UAG_API int uag_run(uag_workspace* ws, int argc, const char* const* argv, char** out, char** err);

UAG_API void uag_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
