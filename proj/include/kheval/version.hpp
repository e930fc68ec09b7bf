#pragma once

namespace kheval {

inline constexpr const char* kHarnessVersion = "0.1.0";

// Bumped whenever the answer-extraction marker list or rule order changes.
inline constexpr const char* kExtractionRulesVersion = "1";

// Bumped whenever the bundled particle list changes.
inline constexpr const char* kParticleListVersion = "1";

}  // namespace kheval
