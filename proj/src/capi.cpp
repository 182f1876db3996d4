#include "uag/uag.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include "uag/commands.hpp"
#include "uag/error.hpp"

struct uag_workspace {
  uag::Workspace ws;
};

namespace {

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void set(char** slot, const std::string& s) {
  if (slot) *slot = dup(s);
}

uag_error_code code_of(uag::ErrorKind k) {
  switch (k) {
    case uag::ErrorKind::Syntax: return UAG_E_SYNTAX;
    case uag::ErrorKind::Sort: return UAG_E_SORT;
    case uag::ErrorKind::Arity: return UAG_E_ARITY;
    case uag::ErrorKind::Reference: return UAG_E_REFERENCE;
    case uag::ErrorKind::CapExceeded: return UAG_E_CAP_EXCEEDED;
    case uag::ErrorKind::NotCongruence: return UAG_E_NOT_CONGRUENCE;
    case uag::ErrorKind::Usage: return UAG_E_USAGE;
    case uag::ErrorKind::Invalid: return UAG_E_INVALID;
  }
  return UAG_E_INTERNAL;
}

template <class F>
uag_error_code load(uag_workspace* ws, char** diagnostic, F&& f) {
  if (diagnostic) *diagnostic = nullptr;
  if (!ws) {
    set(diagnostic, "usage: null workspace");
    return UAG_E_USAGE;
  }
  try {
    f(ws->ws);
    return UAG_E_NONE;
  } catch (const uag::Error& e) {
    set(diagnostic, std::string(uag::error_kind_name(e.kind())) + ": " + e.what());
    return code_of(e.kind());
  } catch (const std::exception& e) {
    set(diagnostic, std::string("internal: ") + e.what());
    return UAG_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* uag_version(void) { return "0.1.0"; }

const char* uag_status_name(int status) {
  switch (status) {
    case UAG_OK: return "ok";
    case UAG_VIOLATION: return "violation";
    case UAG_USAGE: return "usage";
  }
  return "unknown";
}

const char* uag_error_name(uag_error_code code) {
  switch (code) {
    case UAG_E_NONE: return "none";
    case UAG_E_SYNTAX: return "syntax";
    case UAG_E_SORT: return "sort";
    case UAG_E_ARITY: return "arity";
    case UAG_E_REFERENCE: return "reference";
    case UAG_E_CAP_EXCEEDED: return "cap-exceeded";
    case UAG_E_NOT_CONGRUENCE: return "not-congruence";
    case UAG_E_USAGE: return "usage";
    case UAG_E_INVALID: return "invalid";
    case UAG_E_IO: return "io";
    case UAG_E_INTERNAL: return "internal";
  }
  return "unknown";
}

uag_workspace* uag_workspace_new(void) {
  try {
    return new uag_workspace{};
  } catch (...) {
    return nullptr;
  }
}

void uag_workspace_free(uag_workspace* ws) { delete ws; }

uag_error_code uag_workspace_load_file(uag_workspace* ws, const char* path, char** diagnostic) {
  if (!path) {
    set(diagnostic, "usage: null path");
    return UAG_E_USAGE;
  }
  return load(ws, diagnostic, [&](uag::Workspace& w) { w.load_file(path); });
}

uag_error_code uag_workspace_load_text(uag_workspace* ws, const char* text, const char* source, char** diagnostic) {
  if (!text) {
    set(diagnostic, "usage: null text");
    return UAG_E_USAGE;
  }
  return load(ws, diagnostic, [&](uag::Workspace& w) { w.load_text(text, source ? source : "<text>"); });
}

int uag_run(uag_workspace* ws, int argc, const char* const* argv, char** out, char** err) {
  if (out) *out = nullptr;
  if (err) *err = nullptr;
  if (!ws || argc < 0 || (argc > 0 && !argv)) {
    set(err, "error[usage]: bad arguments to uag_run\n");
    return UAG_USAGE;
  }
  try {
    std::vector<std::string> args(argv, argv + argc);
    auto r = uag::run_command(ws->ws, args);
    set(out, r.out);
    set(err, r.err);
    return r.status;
  } catch (const std::exception& e) {
    set(err, std::string("error[internal]: ") + e.what() + "\n");
    return UAG_USAGE;
  }
}

void uag_string_free(char* s) { std::free(s); }

}  // extern "C"
