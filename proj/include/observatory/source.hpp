#pragma once

#include <optional>
#include <string>
#include <vector>

#include "observatory/model.hpp"

namespace observatory {

enum class FetchStatus { ok, throttled, error };

/// Result of a read call against a platform source. A throttle verdict
/// carries an optional retry-after hint; transport errors carry a message.
template <typename T>
struct Fetch {
    FetchStatus status = FetchStatus::ok;
    T value{};
    std::optional<int64_t> retry_after_seconds;
    std::string error;

    bool ok() const { return status == FetchStatus::ok; }

    static Fetch okay(T v) { return Fetch{FetchStatus::ok, std::move(v), std::nullopt, {}}; }
    static Fetch throttled(int64_t retry_after) {
        return Fetch{FetchStatus::throttled, T{}, retry_after, {}};
    }
    static Fetch failed(std::string msg) {
        return Fetch{FetchStatus::error, T{}, std::nullopt, std::move(msg)};
    }
};

/// Read-only platform surface. The collector consumes exactly this
/// interface, so passivity is structural: there is no mutating operation
/// to call. Records returned by a source carry platform fields only;
/// observatory stamps (fetched_at, first_seen_at, last_seen_at) are empty.
class PlatformSource {
public:
    virtual ~PlatformSource() = default;

    /// Posts strictly older than `before` (newest first when absent),
    /// in reverse chronological order, at most `limit`.
    virtual Fetch<std::vector<PostRecord>> list_posts(const std::optional<Timestamp>& before,
                                                      int limit) = 0;
    virtual Fetch<std::vector<CommentRecord>> list_comments(const std::optional<Timestamp>& before,
                                                            int limit) = 0;
    virtual Fetch<AgentRecord> get_agent(const std::string& id) = 0;
    virtual Fetch<std::vector<SubmoltRecord>> list_submolts() = 0;
    virtual Fetch<SnapshotRecord> get_snapshot() = 0;
};

} // namespace observatory
