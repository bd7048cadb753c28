#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

struct sqlite3;

namespace statechat {

// What the service persists per instance. `spec` is the machine spec
// document as submitted; `state` is instance_state_to_json output.
struct InstanceRecord {
    std::string uuid;
    std::string name;
    std::string description;
    std::string status;
    std::string spec;
    std::string state;
    std::string created_at;
    std::string updated_at;

    friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

class InstanceRepository {
public:
    virtual ~InstanceRepository() = default;

    // Insert or replace.
    virtual void save(const InstanceRecord& record) = 0;
    virtual std::optional<InstanceRecord> load(const std::string& uuid) = 0;
    virtual bool remove(const std::string& uuid) = 0;
    // Ordered by creation time, then uuid.
    virtual std::vector<InstanceRecord> list() = 0;
};

class MemoryRepository final : public InstanceRepository {
public:
    void save(const InstanceRecord& record) override;
    std::optional<InstanceRecord> load(const std::string& uuid) override;
    bool remove(const std::string& uuid) override;
    std::vector<InstanceRecord> list() override;

private:
    std::mutex mutex_;
    std::map<std::string, InstanceRecord> records_;
};

// Single-file SQLite store. The file is created on first use.
class SqliteRepository final : public InstanceRepository {
public:
    explicit SqliteRepository(const std::filesystem::path& file);
    ~SqliteRepository() override;
    SqliteRepository(const SqliteRepository&) = delete;
    SqliteRepository& operator=(const SqliteRepository&) = delete;

    void save(const InstanceRecord& record) override;
    std::optional<InstanceRecord> load(const std::string& uuid) override;
    bool remove(const std::string& uuid) override;
    std::vector<InstanceRecord> list() override;

private:
    void exec(const char* sql);

    std::mutex mutex_;
    ::sqlite3* db_ = nullptr;
};

} // namespace statechat
