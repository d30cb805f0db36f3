#pragma once

#include <string>
#include <vector>

namespace tsa {

struct SourceLoc {
    std::string file;
    int line = 0;
    int col = 0;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(col);
    }
    friend bool operator==(const SourceLoc &a, const SourceLoc &b) {
        return a.file == b.file && a.line == b.line && a.col == b.col;
    }
    friend bool operator<(const SourceLoc &a, const SourceLoc &b) {
        if (a.file != b.file) return a.file < b.file;
        if (a.line != b.line) return a.line < b.line;
        return a.col < b.col;
    }
};

enum class AnnotationKind {
    enable,
    disable,
    enable_only,
    disable_only,
    enable_all,
    disable_all,
};

const char *annotation_kind_name(AnnotationKind k);
bool annotation_kind_takes_args(AnnotationKind k);

struct Annotation {
    AnnotationKind kind;
    std::vector<std::string> args;
    SourceLoc loc;
};

} // namespace tsa
