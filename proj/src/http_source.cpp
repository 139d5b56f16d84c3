#include "observatory/http_source.hpp"

#include <httplib.h>

#include "observatory/wire.hpp"

namespace observatory::collect {

using nlohmann::json;

struct HttpSource::Impl {
    httplib::Client client;
    explicit Impl(const std::string& base) : client(base) {
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
    }
};

HttpSource::HttpSource(const std::string& base_url) : impl_(std::make_unique<Impl>(base_url)) {}
HttpSource::~HttpSource() = default;

namespace {

template <typename T>
Fetch<T> classify(const httplib::Result& res) {
    if (!res) return Fetch<T>::failed("transport: " + httplib::to_string(res.error()));
    if (res->status == 429) {
        int64_t retry = 0;
        if (res->has_header("Retry-After")) {
            try {
                retry = std::stoll(res->get_header_value("Retry-After"));
            } catch (...) {
                retry = 0;
            }
        }
        return Fetch<T>::throttled(retry);
    }
    if (res->status != 200)
        return Fetch<T>::failed("http status " + std::to_string(res->status));
    return Fetch<T>::okay(T{});
}

std::string page_path(const char* feed, const std::optional<Timestamp>& before, int limit) {
    std::string path = std::string("/api/") + feed + "?limit=" + std::to_string(limit);
    if (before) path += "&before=" + httplib::detail::encode_url(format_timestamp(*before));
    return path;
}

} // namespace

Fetch<std::vector<PostRecord>> HttpSource::list_posts(const std::optional<Timestamp>& before,
                                                      int limit) {
    using Result = Fetch<std::vector<PostRecord>>;
    if (limit < 1) return Result::failed("limit must be >= 1");
    auto res = impl_->client.Get(page_path("posts", before, limit));
    auto out = classify<std::vector<PostRecord>>(res);
    if (!out.ok()) return out;
    try {
        for (const auto& item : json::parse(res->body)) out.value.push_back(wire::post_from_json(item));
    } catch (const std::exception& e) {
        return Result::failed(std::string("bad payload: ") + e.what());
    }
    return out;
}

Fetch<std::vector<CommentRecord>> HttpSource::list_comments(const std::optional<Timestamp>& before,
                                                            int limit) {
    using Result = Fetch<std::vector<CommentRecord>>;
    if (limit < 1) return Result::failed("limit must be >= 1");
    auto res = impl_->client.Get(page_path("comments", before, limit));
    auto out = classify<std::vector<CommentRecord>>(res);
    if (!out.ok()) return out;
    try {
        for (const auto& item : json::parse(res->body))
            out.value.push_back(wire::comment_from_json(item));
    } catch (const std::exception& e) {
        return Result::failed(std::string("bad payload: ") + e.what());
    }
    return out;
}

Fetch<AgentRecord> HttpSource::get_agent(const std::string& id) {
    using Result = Fetch<AgentRecord>;
    auto res = impl_->client.Get("/api/agents/" + httplib::detail::encode_url(id));
    auto out = classify<AgentRecord>(res);
    if (!out.ok()) return out;
    try {
        out.value = wire::agent_from_json(json::parse(res->body));
    } catch (const std::exception& e) {
        return Result::failed(std::string("bad payload: ") + e.what());
    }
    return out;
}

Fetch<std::vector<SubmoltRecord>> HttpSource::list_submolts() {
    using Result = Fetch<std::vector<SubmoltRecord>>;
    auto res = impl_->client.Get("/api/submolts");
    auto out = classify<std::vector<SubmoltRecord>>(res);
    if (!out.ok()) return out;
    try {
        for (const auto& item : json::parse(res->body))
            out.value.push_back(wire::submolt_from_json(item));
    } catch (const std::exception& e) {
        return Result::failed(std::string("bad payload: ") + e.what());
    }
    return out;
}

Fetch<SnapshotRecord> HttpSource::get_snapshot() {
    using Result = Fetch<SnapshotRecord>;
    auto res = impl_->client.Get("/api/snapshot");
    auto out = classify<SnapshotRecord>(res);
    if (!out.ok()) return out;
    try {
        out.value = wire::snapshot_from_json(json::parse(res->body));
    } catch (const std::exception& e) {
        return Result::failed(std::string("bad payload: ") + e.what());
    }
    return out;
}

} // namespace observatory::collect
