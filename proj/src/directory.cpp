#include "qrb/directory.hpp"

#include <fstream>

#include <json.hpp>

#include "qrb/errors.hpp"

namespace qrb {

void InMemoryDirectory::add(std::string locator, crypto::PublicKey key) {
    entries_[std::move(locator)] = key;
}

bool InMemoryDirectory::remove(std::string_view locator) {
    const auto it = entries_.find(locator);
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
}

std::optional<crypto::PublicKey> InMemoryDirectory::lookup(std::string_view locator) const {
    const auto it = entries_.find(locator);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

InMemoryDirectory load_directory_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DirectoryError("cannot open directory file '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DirectoryError("directory file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
        throw DirectoryError("directory file must hold a JSON object");
    }
    InMemoryDirectory directory;
    for (const auto& [locator, value] : doc.items()) {
        if (!value.is_string()) {
            throw DirectoryError("directory entry '" + locator + "' must be a base64 string");
        }
        directory.add(locator,
                      crypto::PublicKey::from_bytes(base64_decode(value.get<std::string>())));
    }
    return directory;
}

void save_directory_file(const std::filesystem::path& path, const InMemoryDirectory& directory) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [locator, key] : directory.entries()) {
        doc[locator] = base64_encode(key.bytes);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DirectoryError("cannot write directory file '" + path.string() + "'");
    }
    out << doc.dump(2) << '\n';
}

std::optional<crypto::PublicKey> UnreachableDirectory::lookup(std::string_view) const {
    throw DirectoryError("directory unreachable");
}

}  // namespace qrb
