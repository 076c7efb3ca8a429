#include <fstream>
#include <iterator>

#include <json.hpp>

#include "spdc/atomic_file.hpp"
#include "spdc/coincidence.hpp"
#include "spdc/errors.hpp"

namespace spdc {
namespace {

constexpr const char* kModule = "coincidence";
constexpr const char* kMagic = "SPDCFRAMES1";

}  // namespace

void write_frames(const FrameStack& stack, const DetectorModel& detector, double mu_pairs,
                  const std::filesystem::path& path) {
  nlohmann::json header = {
      {"magic", kMagic},
      {"width", stack.width()},
      {"height", stack.height()},
      {"frames", stack.frames()},
      {"seed", stack.seed()},
      {"fingerprint", stack.fingerprint()},
      {"dtype", "uint16le"},
      {"layout", "frame,row,col"},
      {"model",
       {{"pixel_pitch_m", detector.pixel_pitch},
        {"quantum_efficiency", detector.quantum_efficiency},
        {"dark_rate", detector.dark_rate},
        {"mu_pairs", mu_pairs}}},
  };
  write_atomically(path, [&](std::ostream& out) {
    out << header.dump() << '\n';
    const auto& counts = stack.counts();
    std::vector<char> bytes(counts.size() * 2);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      bytes[2 * k] = static_cast<char>(counts[k] & 0xFFu);
      bytes[2 * k + 1] = static_cast<char>(counts[k] >> 8);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  });
}

FrameStack read_frames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(kModule, "cannot open frame stack " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(kModule, "missing frame-stack header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(kModule, std::string("malformed frame-stack header: ") + e.what());
  }
  try {
    if (header.at("magic").get<std::string>() != kMagic) {
      throw IoError(kModule, "not a frame-stack file (bad magic)");
    }
    if (header.at("dtype").get<std::string>() != "uint16le") {
      throw IoError(kModule, "unsupported frame dtype");
    }
    const int width = header.at("width").get<int>();
    const int height = header.at("height").get<int>();
    const auto frames = header.at("frames").get<std::size_t>();
    const auto seed = header.at("seed").get<std::uint64_t>();
    const auto fingerprint = header.at("fingerprint").get<std::string>();
    if (width < 1 || height < 1) throw IoError(kModule, "bad frame dimensions");

    const std::size_t count = static_cast<std::size_t>(width) * height * frames;
    std::vector<char> bytes(count * 2);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
      throw IoError(kModule, "frame stack truncated");
    }
    if (in.peek() != std::char_traits<char>::eof()) {
      throw IoError(kModule, "trailing bytes after frame data");
    }
    std::vector<std::uint16_t> counts(count);
    for (std::size_t k = 0; k < count; ++k) {
      counts[k] = static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[2 * k]) |
                                             (static_cast<unsigned char>(bytes[2 * k + 1]) << 8));
    }
    return FrameStack(width, height, frames, seed, fingerprint, std::move(counts));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(kModule, std::string("frame-stack header: ") + e.what());
  }
}

}  // namespace spdc
