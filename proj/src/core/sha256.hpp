#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace uaviov {

// FIPS 180-4 SHA-256. Streaming interface plus one-shot helpers.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  std::array<std::uint8_t, 32> finish();

  static std::array<std::uint8_t, 32> digest(const void* data, std::size_t len);
  static std::string hex_digest(const void* data, std::size_t len);
  static std::string hex_digest(const std::vector<std::uint8_t>& bytes) {
    return hex_digest(bytes.data(), bytes.size());
  }
  static std::string hex_digest(const std::string& s) {
    return hex_digest(s.data(), s.size());
  }
  static std::string to_hex(const std::array<std::uint8_t, 32>& d);

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_{};
  std::uint64_t total_len_ = 0;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffer_len_ = 0;
};

}  // namespace uaviov
