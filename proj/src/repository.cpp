#include "statechat/repository.hpp"

#include <algorithm>

#include <sqlite3.h>

#include "statechat/errors.hpp"

namespace statechat {

namespace {

bool created_before(const InstanceRecord& a, const InstanceRecord& b) {
    return std::tie(a.created_at, a.uuid) < std::tie(b.created_at, b.uuid);
}

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
            throw Error(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int index, const std::string& value) {
        sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()), SQLITE_TRANSIENT);
        return *this;
    }

    // True while a row is available.
    bool step() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw Error(std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
    }

    std::string text(int column) const {
        const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, column));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, column))) : std::string();
    }

    InstanceRecord record() const {
        return {text(0), text(1), text(2), text(3), text(4), text(5), text(6), text(7)};
    }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kColumns =
    "uuid, name, description, status, spec, state, created_at, updated_at";

} // namespace

void MemoryRepository::save(const InstanceRecord& record) {
    std::lock_guard lock(mutex_);
    records_.insert_or_assign(record.uuid, record);
}

std::optional<InstanceRecord> MemoryRepository::load(const std::string& uuid) {
    std::lock_guard lock(mutex_);
    auto it = records_.find(uuid);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

bool MemoryRepository::remove(const std::string& uuid) {
    std::lock_guard lock(mutex_);
    return records_.erase(uuid) > 0;
}

std::vector<InstanceRecord> MemoryRepository::list() {
    std::lock_guard lock(mutex_);
    std::vector<InstanceRecord> out;
    for (const auto& [_, r] : records_) out.push_back(r);
    std::sort(out.begin(), out.end(), created_before);
    return out;
}

SqliteRepository::SqliteRepository(const std::filesystem::path& file) {
    if (sqlite3_open(file.string().c_str(), &db_) != SQLITE_OK) {
        std::string why = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        db_ = nullptr;
        throw Error("cannot open instance store " + file.string() + ": " + why);
    }
    sqlite3_busy_timeout(db_, 2000);
    exec("PRAGMA journal_mode=WAL");
    exec("CREATE TABLE IF NOT EXISTS instances ("
         "uuid TEXT PRIMARY KEY, name TEXT NOT NULL, description TEXT NOT NULL, status TEXT NOT NULL, "
         "spec TEXT NOT NULL, state TEXT NOT NULL, created_at TEXT NOT NULL, updated_at TEXT NOT NULL)");
}

SqliteRepository::~SqliteRepository() {
    sqlite3_close(db_);
}

void SqliteRepository::exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string why = err ? err : "unknown error";
        sqlite3_free(err);
        throw Error("sqlite: " + why);
    }
}

void SqliteRepository::save(const InstanceRecord& r) {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, "INSERT OR REPLACE INTO instances (uuid, name, description, status, spec, state, "
                        "created_at, updated_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
    stmt.bind(1, r.uuid).bind(2, r.name).bind(3, r.description).bind(4, r.status);
    stmt.bind(5, r.spec).bind(6, r.state).bind(7, r.created_at).bind(8, r.updated_at);
    stmt.step();
}

std::optional<InstanceRecord> SqliteRepository::load(const std::string& uuid) {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, (std::string("SELECT ") + kColumns + " FROM instances WHERE uuid = ?").c_str());
    stmt.bind(1, uuid);
    if (!stmt.step()) return std::nullopt;
    return stmt.record();
}

bool SqliteRepository::remove(const std::string& uuid) {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, "DELETE FROM instances WHERE uuid = ?");
    stmt.bind(1, uuid);
    stmt.step();
    return sqlite3_changes(db_) > 0;
}

std::vector<InstanceRecord> SqliteRepository::list() {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, (std::string("SELECT ") + kColumns + " FROM instances ORDER BY created_at, uuid").c_str());
    std::vector<InstanceRecord> out;
    while (stmt.step()) out.push_back(stmt.record());
    return out;
}

} // namespace statechat
