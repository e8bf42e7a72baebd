#pragma once

#include <string>
#include <utility>
#include <vector>

namespace robench {

// Agent prompt templates. Runtime inputs replace the <<...>> placeholders.
extern const char* const kReformulatorPrompt;
extern const char* const kCoderPrompt;
extern const char* const kCoderCodePrompt;
extern const char* const kReflectorPrompt;

// Section markers used to locate the robust counterpart inside a coder prompt.
inline constexpr const char* kCoderInputHeader = "=== PROBLEM (ROBUST COUNTERPART) ===\n";
inline constexpr const char* kSectionRule =
    "\n\n==================================================================";

std::string build_reformulator_prompt(const std::string& problem, const std::string& memory);
std::string build_coder_prompt(const std::string& robust_counterpart);

struct ReflectionSample {
  bool correct = false;
  std::string problem;
  std::string reformulator_output;
  std::string feedback;
};

// One SAMPLE block per entry, in order.
std::string build_reflector_prompt(const std::string& memory,
                                   const std::vector<ReflectionSample>& samples);

// Inverse of build_coder_prompt: the text between the input header and the
// next section rule. Throws SchemaError if the markers are missing.
std::string extract_coder_input(const std::string& prompt);

// Replaces placeholders in a single left-to-right pass; substituted values are
// never rescanned.
std::string fill(const std::string& text,
                 const std::vector<std::pair<std::string, std::string>>& values);
std::string substitute(std::string text, const std::string& placeholder, const std::string& value);

}  // namespace robench
