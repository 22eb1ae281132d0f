#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace uaviov {

// Content-addressed blob store: blobs live in a directory, named by the
// lowercase hex SHA-256 of their bytes. get() re-hashes and fails on
// corruption. Stands in for the distributed file store holding trained
// models.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path root);

  // Stores bytes, returns the hex digest. Idempotent for identical content.
  std::string put(const std::vector<std::uint8_t>& bytes);

  // Loads and verifies a blob. Throws NotFoundError / IntegrityError.
  std::vector<std::uint8_t> get(const std::string& hex_digest) const;

  bool contains(const std::string& hex_digest) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path blob_path(const std::string& hex_digest) const;

  std::filesystem::path root_;
};

}  // namespace uaviov
