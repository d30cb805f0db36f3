#include "tsa/resolve.hpp"

#include <utility>

#include "tsa/error.hpp"

namespace tsa {

namespace {

void validate_base_class(const ClassDecl &cls) {
    if (!cls.fields.empty())
        fail_at(ErrorKind::spec_invalid, cls.loc,
                "annotated class '" + cls.name + "' cannot declare fields");
    for (const auto &m : cls.methods)
        if (m.body)
            fail_at(ErrorKind::spec_invalid, m.loc,
                    "annotated class '" + cls.name + "' must contain declarations only, but '" +
                        m.name + "' has a body");
}

void validate_composed_class(const ClassDecl &cls,
                             const std::map<std::string, const ClassDecl *> &classes) {
    for (const auto &m : cls.methods) {
        if (m.name == cls.name)
            fail_at(ErrorKind::spec_invalid, m.loc,
                    "class '" + cls.name + "' may not declare its own constructor");
        if (!m.body)
            fail_at(ErrorKind::spec_invalid, m.loc,
                    "method '" + cls.name + "." + m.name + "' has no body");
    }
    for (const auto &f : cls.fields)
        if (!classes.count(f.class_name))
            fail_at(ErrorKind::name_resolution, f.loc, "unknown class '" + f.class_name + "'");
}

} // namespace

ProgramInfo resolve_program(Program program) {
    ProgramInfo info;
    info.program = std::move(program);

    for (const auto &cls : info.program.classes) {
        auto [it, inserted] = info.classes.emplace(cls.name, &cls);
        (void)it;
        if (!inserted)
            fail_at(ErrorKind::name_resolution, cls.loc, "duplicate class '" + cls.name + "'");
    }

    for (const auto &cls : info.program.classes) {
        if (cls.is_base()) {
            validate_base_class(cls);
            info.contracts.emplace(cls.name, build_contract(cls));
        } else {
            validate_composed_class(cls, info.classes);
        }
    }

    for (const auto &cls : info.program.classes) {
        if (cls.is_base())
            continue;
        Cfg ctor = build_synthetic_ctor_cfg(cls);
        info.cfgs.emplace(ctor.key(), std::move(ctor));
        for (const auto &m : cls.methods) {
            Cfg cfg = build_cfg(*m.body, cls.name, m.name, m.params, info.classes, m.loc);
            info.cfgs.emplace(cfg.key(), std::move(cfg));
        }
    }

    std::map<std::string, const FunctionDecl *> functions;
    for (const auto &fn : info.program.functions) {
        auto [it, inserted] = functions.emplace(fn.name, &fn);
        (void)it;
        if (!inserted)
            fail_at(ErrorKind::name_resolution, fn.loc, "duplicate function '" + fn.name + "'");
        Cfg cfg = build_cfg(fn.body, "", fn.name, {}, info.classes, fn.loc);
        info.cfgs.emplace(cfg.key(), std::move(cfg));
    }

    return info;
}

} // namespace tsa
