#include "observatory/wire.hpp"

namespace observatory::wire {

using nlohmann::json;

namespace {

json opt(const std::optional<std::string>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<std::string> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

} // namespace

json agent_to_json(const AgentRecord& r) {
    return json{{"id", r.id},
                {"name", r.name},
                {"description", opt(r.description)},
                {"karma", r.karma},
                {"follower_count", r.follower_count},
                {"following_count", r.following_count},
                {"is_claimed", r.is_claimed},
                {"owner_x_handle", opt(r.owner_x_handle)},
                {"created_at", opt(r.created_at)},
                {"avatar_url", opt(r.avatar_url)}};
}

AgentRecord agent_from_json(const json& j) {
    AgentRecord r;
    r.id = j.at("id").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.description = opt_from(j, "description");
    r.karma = j.at("karma").get<int64_t>();
    r.follower_count = j.at("follower_count").get<int64_t>();
    r.following_count = j.at("following_count").get<int64_t>();
    r.is_claimed = j.at("is_claimed").get<bool>();
    r.owner_x_handle = opt_from(j, "owner_x_handle");
    r.created_at = opt_from(j, "created_at");
    r.avatar_url = opt_from(j, "avatar_url");
    return r;
}

json post_to_json(const PostRecord& r) {
    return json{{"id", r.id},
                {"agent_id", r.agent_id},
                {"agent_name", r.agent_name},
                {"submolt", r.submolt},
                {"title", r.title},
                {"content", r.content},
                {"url", opt(r.url)},
                {"score", r.score},
                {"comment_count", r.comment_count},
                {"created_at", r.created_at},
                {"is_pinned", r.is_pinned}};
}

PostRecord post_from_json(const json& j) {
    PostRecord r;
    r.id = j.at("id").get<std::string>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.agent_name = j.at("agent_name").get<std::string>();
    r.submolt = j.at("submolt").get<std::string>();
    r.title = j.at("title").get<std::string>();
    r.content = j.at("content").get<std::string>();
    r.url = opt_from(j, "url");
    r.score = j.at("score").get<int64_t>();
    r.comment_count = j.at("comment_count").get<int64_t>();
    r.created_at = j.at("created_at").get<std::string>();
    r.is_pinned = j.at("is_pinned").get<bool>();
    return r;
}

json comment_to_json(const CommentRecord& r) {
    return json{{"id", r.id},
                {"post_id", r.post_id},
                {"agent_id", r.agent_id},
                {"agent_name", r.agent_name},
                {"parent_id", opt(r.parent_id)},
                {"content", r.content},
                {"score", r.score},
                {"created_at", r.created_at}};
}

CommentRecord comment_from_json(const json& j) {
    CommentRecord r;
    r.id = j.at("id").get<std::string>();
    r.post_id = j.at("post_id").get<std::string>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.agent_name = j.at("agent_name").get<std::string>();
    r.parent_id = opt_from(j, "parent_id");
    r.content = j.at("content").get<std::string>();
    r.score = j.at("score").get<int64_t>();
    r.created_at = j.at("created_at").get<std::string>();
    return r;
}

json submolt_to_json(const SubmoltRecord& r) {
    return json{{"name", r.name},
                {"display_name", r.display_name},
                {"description", opt(r.description)},
                {"subscriber_count", r.subscriber_count},
                {"post_count", r.post_count},
                {"created_at", opt(r.created_at)},
                {"avatar_url", opt(r.avatar_url)},
                {"banner_url", opt(r.banner_url)}};
}

SubmoltRecord submolt_from_json(const json& j) {
    SubmoltRecord r;
    r.name = j.at("name").get<std::string>();
    r.display_name = j.at("display_name").get<std::string>();
    r.description = opt_from(j, "description");
    r.subscriber_count = j.at("subscriber_count").get<int64_t>();
    r.post_count = j.at("post_count").get<int64_t>();
    r.created_at = opt_from(j, "created_at");
    r.avatar_url = opt_from(j, "avatar_url");
    r.banner_url = opt_from(j, "banner_url");
    return r;
}

json snapshot_to_json(const SnapshotRecord& r) {
    return json{{"id", r.id},
                {"timestamp", r.timestamp},
                {"total_agents", r.total_agents},
                {"total_posts", r.total_posts},
                {"total_comments", r.total_comments},
                {"active_agents_24h", r.active_agents_24h},
                {"avg_sentiment", r.avg_sentiment},
                {"top_words", r.top_words}};
}

SnapshotRecord snapshot_from_json(const json& j) {
    SnapshotRecord r;
    r.id = j.at("id").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.total_agents = j.at("total_agents").get<int64_t>();
    r.total_posts = j.at("total_posts").get<int64_t>();
    r.total_comments = j.at("total_comments").get<int64_t>();
    r.active_agents_24h = j.at("active_agents_24h").get<int64_t>();
    r.avg_sentiment = j.at("avg_sentiment").get<double>();
    r.top_words = j.at("top_words").get<std::string>();
    return r;
}

} // namespace observatory::wire
