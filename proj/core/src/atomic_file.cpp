#include "spdc/atomic_file.hpp"

#include <fstream>
#include <system_error>

#include "spdc/errors.hpp"

namespace spdc {

void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io", "cannot open " + tmp.string() + " for writing");
    try {
      body(out);
    } catch (...) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("io", "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("io", "cannot rename " + tmp.string() + " to " + path.string() + ": " +
                            ec.message());
  }
}

}  // namespace spdc
