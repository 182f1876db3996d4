#include <cstdio>

#include "uag/uag.h"

int main(int argc, char** argv) {
  uag_workspace* ws = uag_workspace_new();
  if (!ws) {
    std::fputs("error[internal]: out of memory\n", stderr);
    return 2;
  }
  char* out = nullptr;
  char* err = nullptr;
  int status = uag_run(ws, argc - 1, argv + 1, &out, &err);
  if (out) std::fputs(out, stdout);
  if (err) std::fputs(err, stderr);
  uag_string_free(out);
  uag_string_free(err);
  uag_workspace_free(ws);
  return status;
}
