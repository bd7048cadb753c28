#include "statechat/storage.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace statechat {

InteractionStorage::InteractionStorage(Map entries) {
    for (auto& [key, value] : entries) set(key, std::move(value));
}

void InteractionStorage::set(std::string key, std::string value) {
    if (key.empty()) throw std::invalid_argument("storage keys must be non-empty");
    entries_.insert_or_assign(std::move(key), std::move(value));
}

std::optional<std::string> InteractionStorage::get(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    return std::nullopt;
}

const std::string* InteractionStorage::find(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool InteractionStorage::erase(std::string_view key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
}

void to_json(nlohmann::json& j, const InteractionStorage& storage) {
    j = nlohmann::json::object();
    for (const auto& [k, v] : storage.entries()) j[k] = v;
}

void from_json(const nlohmann::json& j, InteractionStorage& storage) {
    storage.clear();
    for (const auto& [k, v] : j.items()) storage.set(k, v.is_string() ? v.get<std::string>() : v.dump());
}

} // namespace statechat
