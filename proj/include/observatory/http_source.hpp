#pragma once

#include <memory>
#include <string>

#include "observatory/source.hpp"

namespace observatory::collect {

/// Read-only HTTP binding of the platform source contract:
///   GET {base}/api/posts?limit=N[&before=<ISO-8601>]
///   GET {base}/api/comments?limit=N[&before=<ISO-8601>]
///   GET {base}/api/agents/<id>
///   GET {base}/api/submolts
///   GET {base}/api/snapshot
/// HTTP 429 maps to a throttle verdict (Retry-After honored when present);
/// other failures map to transport errors.
class HttpSource final : public PlatformSource {
public:
    explicit HttpSource(const std::string& base_url);
    ~HttpSource() override;

    Fetch<std::vector<PostRecord>> list_posts(const std::optional<Timestamp>& before,
                                              int limit) override;
    Fetch<std::vector<CommentRecord>> list_comments(const std::optional<Timestamp>& before,
                                                    int limit) override;
    Fetch<AgentRecord> get_agent(const std::string& id) override;
    Fetch<std::vector<SubmoltRecord>> list_submolts() override;
    Fetch<SnapshotRecord> get_snapshot() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace observatory::collect
