#pragma once

namespace cuest {

inline constexpr const char* kVersion = "0.1.0";

// Rule versions stamped into run_meta.json; bump when a pinned rule changes,
// since golden outputs depend on them.
inline constexpr const char* kDeviceRulesVersion = "device-rules/1";
inline constexpr const char* kJudgePatternsVersion = "factoid-patterns/1";
inline constexpr const char* kEmbedderVersion = "hashed-tf-256-fnv1a/1";
inline constexpr const char* kVerdictRuleVersion = "pairwise-dominance/1";

}  // namespace cuest
