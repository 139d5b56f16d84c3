#pragma once

#include <json.hpp>

#include "observatory/model.hpp"

namespace observatory::wire {

// Platform-side JSON encodings shared by the simulator corpus files and
// the HTTP source binding. Observatory-stamped fields are not on the wire.

nlohmann::json agent_to_json(const AgentRecord& r);
AgentRecord agent_from_json(const nlohmann::json& j);

nlohmann::json post_to_json(const PostRecord& r);
PostRecord post_from_json(const nlohmann::json& j);

nlohmann::json comment_to_json(const CommentRecord& r);
CommentRecord comment_from_json(const nlohmann::json& j);

nlohmann::json submolt_to_json(const SubmoltRecord& r);
SubmoltRecord submolt_from_json(const nlohmann::json& j);

nlohmann::json snapshot_to_json(const SnapshotRecord& r);
SnapshotRecord snapshot_from_json(const nlohmann::json& j);

} // namespace observatory::wire
