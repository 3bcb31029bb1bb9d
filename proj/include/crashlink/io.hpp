// Whole-file read/write helpers shared by the loaders and the CLI.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "crashlink/result.hpp"

namespace crashlink {

Result<std::string> read_file(const std::string& path);

// Returns the error, or nullopt on success.
std::optional<Error> write_file(const std::string& path, std::string_view content);

}  // namespace crashlink
