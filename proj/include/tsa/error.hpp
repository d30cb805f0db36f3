#pragma once

#include <stdexcept>
#include <string>

#include "tsa/common.hpp"

namespace tsa {

enum class ErrorKind {
    syntax,
    name_resolution,
    type_error,
    unknown_method_name,
    overlapping_enable_disable,
    well_formedness,
    alphabet_mismatch,
    width_mismatch,
    too_many_methods,
    state_explosion,
    unknown_state,
    recursion_unsupported,
    spec_invalid,
    usage,
    internal,
};

const char *error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), m_kind(kind) {}

    Error(ErrorKind kind, const SourceLoc &loc, std::string msg)
        : std::runtime_error(loc.str() + ": " + error_kind_name(kind) + ": " + msg),
          m_kind(kind), m_loc(loc) {}

    ErrorKind kind() const { return m_kind; }
    const SourceLoc &loc() const { return m_loc; }

  private:
    ErrorKind m_kind;
    SourceLoc m_loc;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &msg) {
    throw Error(kind, msg);
}

[[noreturn]] inline void fail_at(ErrorKind kind, const SourceLoc &loc, const std::string &msg) {
    throw Error(kind, loc, msg);
}

} // namespace tsa
