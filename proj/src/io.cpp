#include "crashlink/io.hpp"

#include <fstream>
#include <sstream>

namespace crashlink {

Result<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return Error{ErrCode::IoError, "cannot open for reading: " + path};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        return Error{ErrCode::IoError, "read failed: " + path};
    }
    return buf.str();
}

std::optional<Error> write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        return Error{ErrCode::IoError, "cannot open for writing: " + path};
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        return Error{ErrCode::IoError, "write failed: " + path};
    }
    return std::nullopt;
}

}  // namespace crashlink
