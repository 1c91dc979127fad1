#ifndef DNSSQUAT_TEXT_INPUT_HPP
#define DNSSQUAT_TEXT_INPUT_HPP

#include <zlib.h>

#include <string>

#include "dnssquat/common.hpp"

namespace dnssquat {

/// Whole file as text; gzip-compressed files are inflated transparently.
inline std::string read_text_file(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::string out;
    char buf[1 << 16];
    while (true) {
        const int n = gzread(f, buf, sizeof buf);
        if (n < 0) {
            int code = 0;
            std::string msg = gzerror(f, &code);
            gzclose(f);
            throw Error(ErrorKind::io, "read failure on '" + path + "': " + msg);
        }
        if (n == 0) break;
        out.append(buf, static_cast<std::size_t>(n));
    }
    gzclose(f);
    return out;
}

}  // namespace dnssquat

#endif  // DNSSQUAT_TEXT_INPUT_HPP
