#pragma once

#include <filesystem>
#include <functional>
#include <ostream>

namespace spdc {

/// Writes through `body` into a temporary sibling of `path`, then renames it
/// over `path`. Throws IoError on failure; the target is left untouched.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body);

}  // namespace spdc
