#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qrb/crypto.hpp"

namespace qrb {

/// Public-key lookup service. The owner fetches trustee keys from it when
/// building a backup; trustees fetch the owner's key from it to verify
/// packet signatures.
class IdentityDirectory {
public:
    virtual ~IdentityDirectory() = default;

    /// Returns the key registered under `locator`, or nullopt when the
    /// locator is unknown. Throws DirectoryError when the directory itself
    /// cannot be reached.
    virtual std::optional<crypto::PublicKey> lookup(std::string_view locator) const = 0;
};

class InMemoryDirectory final : public IdentityDirectory {
public:
    void add(std::string locator, crypto::PublicKey key);
    bool remove(std::string_view locator);
    std::optional<crypto::PublicKey> lookup(std::string_view locator) const override;
    const std::map<std::string, crypto::PublicKey, std::less<>>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, crypto::PublicKey, std::less<>> entries_;
};

/// Simple JSON file of locator -> base64 public key, used by the CLI.
InMemoryDirectory load_directory_file(const std::filesystem::path& path);
void save_directory_file(const std::filesystem::path& path, const InMemoryDirectory& directory);

/// Directory that always throws DirectoryError; models an unreachable
/// service in tests.
class UnreachableDirectory final : public IdentityDirectory {
public:
    std::optional<crypto::PublicKey> lookup(std::string_view) const override;
};

}  // namespace qrb
