#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace statechat {

// Per-instance key-value store shared by states, transitions, actions and
// external components. Values are plain strings; structured values are
// stored JSON-encoded. Keys must be non-empty; last write wins.
class InteractionStorage {
public:
    using Map = std::map<std::string, std::string, std::less<>>;

    InteractionStorage() = default;
    explicit InteractionStorage(Map entries);

    void set(std::string key, std::string value);
    std::optional<std::string> get(std::string_view key) const;
    const std::string* find(std::string_view key) const;
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    bool erase(std::string_view key);
    void clear() { entries_.clear(); }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Map& entries() const { return entries_; }

    friend bool operator==(const InteractionStorage&, const InteractionStorage&) = default;

private:
    Map entries_;
};

void to_json(nlohmann::json& j, const InteractionStorage& storage);
void from_json(const nlohmann::json& j, InteractionStorage& storage);

} // namespace statechat
