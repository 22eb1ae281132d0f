#include "core/model_store.hpp"

#include <fstream>

#include "core/errors.hpp"
#include "core/sha256.hpp"

namespace uaviov {

namespace fs = std::filesystem;

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

fs::path ModelStore::blob_path(const std::string& hex_digest) const {
  if (hex_digest.size() != 64 ||
      hex_digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw NotFoundError("malformed blob digest: " + hex_digest);
  }
  return root_ / hex_digest;
}

std::string ModelStore::put(const std::vector<std::uint8_t>& bytes) {
  const std::string digest = Sha256::hex_digest(bytes);
  const fs::path path = root_ / digest;
  if (!fs::exists(path)) {
    const fs::path tmp = root_ / (digest + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IntegrityError("cannot write blob: " + tmp.string());
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
    fs::rename(tmp, path);
  }
  return digest;
}

std::vector<std::uint8_t> ModelStore::get(const std::string& hex_digest) const {
  const fs::path path = blob_path(hex_digest);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("blob not found: " + hex_digest);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (Sha256::hex_digest(bytes) != hex_digest) {
    throw IntegrityError("blob content does not match digest " + hex_digest);
  }
  return bytes;
}

bool ModelStore::contains(const std::string& hex_digest) const {
  return fs::exists(blob_path(hex_digest));
}

}  // namespace uaviov
