// Command-line front end. Everything goes through the C API.
#include <cstdio>

#include "ptspec/ptspec.h"

int main(int argc, char** argv) {
  ptspec_config* config = nullptr;
  char* help = nullptr;
  const ptspec_status st = ptspec_config_from_args(argc - 1, argv + 1, &config, &help);
  if (st == PTSPEC_HELP) {
    std::fputs(help, stdout);
    ptspec_string_free(help);
    return 0;
  }
  if (st != PTSPEC_OK) {
    std::fprintf(stderr, "error: %s\n", ptspec_last_error());
    std::fputs("run 'ptspec --help' for usage\n", stderr);
    return 2;
  }

  int code = 0;
  char* out = nullptr;
  char* diag = nullptr;
  if (ptspec_run(config, &code, &out, &diag) != PTSPEC_OK) {
    std::fprintf(stderr, "error: %s\n", ptspec_last_error());
    ptspec_config_free(config);
    return 3;
  }
  std::fputs(out, stdout);
  std::fputs(diag, stderr);
  ptspec_string_free(out);
  ptspec_string_free(diag);
  ptspec_config_free(config);
  return code;
}
