#include "tsa/common.hpp"
#include "tsa/error.hpp"

namespace tsa {

const char *annotation_kind_name(AnnotationKind k) {
    switch (k) {
    case AnnotationKind::enable: return "Enable";
    case AnnotationKind::disable: return "Disable";
    case AnnotationKind::enable_only: return "EnableOnly";
    case AnnotationKind::disable_only: return "DisableOnly";
    case AnnotationKind::enable_all: return "EnableAll";
    case AnnotationKind::disable_all: return "DisableAll";
    }
    return "?";
}

bool annotation_kind_takes_args(AnnotationKind k) {
    return k != AnnotationKind::enable_all && k != AnnotationKind::disable_all;
}

const char *error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::name_resolution: return "name resolution error";
    case ErrorKind::type_error: return "type error";
    case ErrorKind::unknown_method_name: return "unknown method name";
    case ErrorKind::overlapping_enable_disable: return "overlapping enable/disable";
    case ErrorKind::well_formedness: return "well-formedness violation";
    case ErrorKind::alphabet_mismatch: return "alphabet mismatch";
    case ErrorKind::width_mismatch: return "width mismatch";
    case ErrorKind::too_many_methods: return "too many methods";
    case ErrorKind::state_explosion: return "state limit exceeded";
    case ErrorKind::unknown_state: return "unknown state";
    case ErrorKind::recursion_unsupported: return "recursion unsupported";
    case ErrorKind::spec_invalid: return "invalid spec";
    case ErrorKind::usage: return "usage error";
    case ErrorKind::internal: return "internal error";
    }
    return "error";
}

} // namespace tsa
