#include "robench/prompts.hpp"

#include "robench/errors.hpp"

namespace robench {

const char* const kReformulatorPrompt = R"PROMPT(You are a Reformulator.

Your task is to convert the input robust optimization problem into a tractable
robust counterpart -- a fully explicit deterministic formulation in which all
effects of uncertainty are resolved, with no shorthand operators remaining
(e.g., absolute values |*|, max/min, norms, or supremum expressions).

Use the experience memory to assist: match each minimal independent reformulation
unit (e.g., a single uncertain constraint or uncertain objective term) to the
most relevant experience if one exists, and apply that experience's reformulation
approach; derive the counterpart from scratch for unmatched units.

All specific numeric values from the problem instance must be preserved and
appear explicitly in the final answer.

==================================================================
INPUT
==================================================================

=== PROBLEM ===
<<PROBLEM INPUT>>

=== REFORMULATION EXPERIENCE MEMORY ===
<<EXPERIENCE MEMORY>>

==================================================================
OUTPUT FORMAT
==================================================================

Your ENTIRE response MUST be a single valid JSON object -- nothing else.
  * Do NOT include any text, commentary, or markdown outside the JSON.
  * Do NOT wrap the JSON in code fences.
  * The FIRST character of your response MUST be { and the LAST MUST be }.

"reasoning" MUST cover:
  (a) For each reformulation unit: which experience was matched (or none) and why.
  (b) The derivation process that transforms each unit into its tractable
      robust counterpart.

"matched_experience_ids" MUST be a list of integer experience IDs matched to
reformulation units in (a). Use [] if no unit was matched.

"final_answer" MUST be a complete mathematical formulation of the tractable
robust counterpart in LaTeX within a \begin{align}...\end{align} environment,
with all numeric values from the problem instance appearing explicitly.

Return ONLY a RAW JSON object with the following structure:
{
  "reasoning": <matching analysis and derivation process for each reformulation unit>,
  "matched_experience_ids": [<list of matched experience IDs as integers>],
  "final_answer": <the tractable robust counterpart with numeric values in LaTeX>
}
)PROMPT";

// Original code-emitting coder prompt, kept as a fixture. The pipeline uses
// kCoderPrompt, which asks for RC-JSON instead of executable code.
const char* const kCoderCodePrompt = R"PROMPT(You are a Coder.

Your task is to write Python code that uses the `gurobipy' library to solve
the given optimization problem (a tractable robust counterpart).

Import gurobipy and create a Model for the given problem. Solve the model, and
then print the optimal objective value using print(model.ObjVal). If the model
is infeasible or unbounded, print "infeasible" or "unbounded" accordingly.

Note: In Gurobi, the default lower bound for variables is 0. Free variables
(unbounded) MUST be declared explicitly with a negative infinity lower bound
(e.g., lb=float(`-inf') or lb=-GRB.INFINITY).

==================================================================
INPUT
==================================================================

=== PROBLEM (ROBUST COUNTERPART) ===
<<ROBUST COUNTERPART INPUT>>

==================================================================
OUTPUT FORMAT
==================================================================

Your ENTIRE response MUST be a single valid JSON object -- nothing else.
  * Do NOT include any text, commentary, or markdown outside the JSON.
  * Do NOT wrap the JSON in code fences.
  * The FIRST character of your response MUST be { and the LAST MUST be }.

Return ONLY a RAW JSON object with the following structure:
{
  "reasoning": <step-by-step thinking on how to translate the formulation into code>,
  "final_answer": <the complete Python code>
}
)PROMPT";

const char* const kCoderPrompt = R"PROMPT(You are a Coder.

Your task is to translate the given optimization problem (a tractable robust
counterpart) into a linear program written in RC-JSON, a structured format that
is solved directly by the evaluation environment.

RC-JSON is a single JSON object:
  {"sense": "min" or "max",
   "vars": [{"name": <string>, "lb": <number or null>, "ub": <number or null>}, ...],
   "obj": [<one objective coefficient per variable, in "vars" order>],
   "cons": [{"coef": [<one coefficient per variable>], "sense": "<=" or ">=" or "=",
             "rhs": <number>}, ...]}

Note: There is no default bound. Every variable MUST state both "lb" and "ub";
use null for an infinite bound, so a free variable has "lb": null and "ub": null.

==================================================================
INPUT
==================================================================

=== PROBLEM (ROBUST COUNTERPART) ===
<<ROBUST COUNTERPART INPUT>>

==================================================================
OUTPUT FORMAT
==================================================================

Your ENTIRE response MUST be a single valid JSON object -- nothing else.
  * Do NOT include any text, commentary, or markdown outside the JSON.
  * Do NOT wrap the JSON in code fences.
  * The FIRST character of your response MUST be { and the LAST MUST be }.

Return ONLY a RAW JSON object with the following structure:
{
  "reasoning": <step-by-step thinking on how to translate the formulation into RC-JSON>,
  "final_answer": <the complete RC-JSON object>
}
)PROMPT";

const char* const kReflectorPrompt = R"PROMPT(You are a Reflector.

Your task is to reflect on all training samples in the current step (both
correct and incorrect) and update the reformulation experience memory -- a
collection of experiences that each capture how a specific type of robust
optimization structure should be correctly reformulated into its tractable
robust counterpart. Use three operators: `add', `update', and `delete'.
Each experience_id MUST appear at most once across all operators.

The usage scores shown in the memory (success / failure counts) record how
often each experience has led to a correct or incorrect final answer when used.

Note: A problem may match multiple experiences (one per reformulation unit).
A failure does not imply every matched experience is wrong -- the root cause
may lie in only one of the matched experiences, while others are correct.

In your `reasoning', analyze the root cause of each failure by examining the
Reformulator's matched experience IDs, its reasoning, and the environment
feedback for all samples. Use the correct samples as reference to understand
what works, and focus your operator decisions on resolving the failures without
disrupting what is already correct. Consider all samples together and decide on
a unified set of memory operations. Then decide which operators to apply:
  - `add' a new experience if no suitable one exists in memory.
  - `update' an existing experience if its content is incorrect or misleading.
  - `delete' an experience if it is harmful.

==================================================================
INPUT
==================================================================

=== EXISTING REFORMULATION EXPERIENCE MEMORY ===
<<EXPERIENCE MEMORY>>

--- SAMPLE 1 (CORRECT / INCORRECT) ---

=== PROBLEM ===
<<PROBLEM INPUT>>

=== REFORMULATOR'S OUTPUT ===
<<REFORMULATOR OUTPUT>>

=== ENVIRONMENT FEEDBACK ===
<<SOLVER FEEDBACK>>

<<... ADDITIONAL SAMPLES ...>>

==================================================================
OUTPUT FORMAT
==================================================================

Your ENTIRE response MUST be a single valid JSON object -- nothing else.
  * Do NOT include any text, commentary, or markdown outside the JSON.
  * Do NOT wrap the JSON in code fences.
  * The FIRST character of your response MUST be { and the LAST MUST be }.

Fields per operator:
- add:    {"operator": `add', "experience_id": int, "content": "..."}
- update: {"operator": `update', "experience_id": int, "content": "..."}
- delete: {"operator": `delete', "experience_id": int}

Note on `add' experience_id: assign max(existing experience ids) + 1 for the
first `add', max(existing experience ids) + 2 for the second, and so on.
Each `add' MUST use a distinct new ID.

Return ONLY a RAW JSON object with the following structure:
{
  "reasoning": <step-by-step thinking covering: (1) failure diagnosis,
                (2) correct reformulation derivation for the affected unit(s),
                and (3) operator decisions>,
  "final_answer": [
    { ... }
  ]
}
)PROMPT";

namespace {

const std::string kSampleBegin = "--- SAMPLE 1 (CORRECT / INCORRECT) ---";
const std::string kSampleEnd = "<<... ADDITIONAL SAMPLES ...>>";

}  // namespace

std::string substitute(std::string text, const std::string& placeholder, const std::string& value) {
  return fill(text, {{placeholder, value}});
}

std::string fill(const std::string& text,
                 const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t best = std::string::npos;
    const std::pair<std::string, std::string>* hit = nullptr;
    for (const auto& kv : values) {
      const std::size_t at = text.find(kv.first, pos);
      if (at < best) {
        best = at;
        hit = &kv;
      }
    }
    if (!hit) break;
    out.append(text, pos, best - pos);
    out += hit->second;
    pos = best + hit->first.size();
  }
  out.append(text, pos, std::string::npos);
  return out;
}

std::string build_reformulator_prompt(const std::string& problem, const std::string& memory) {
  return fill(kReformulatorPrompt,
              {{"<<PROBLEM INPUT>>", problem}, {"<<EXPERIENCE MEMORY>>", memory}});
}

std::string build_coder_prompt(const std::string& robust_counterpart) {
  return substitute(kCoderPrompt, "<<ROBUST COUNTERPART INPUT>>", robust_counterpart);
}

std::string build_reflector_prompt(const std::string& memory,
                                   const std::vector<ReflectionSample>& samples) {
  const std::string tmpl = kReflectorPrompt;
  const std::size_t begin = tmpl.find(kSampleBegin);
  const std::size_t end = tmpl.find(kSampleEnd);
  const std::string block =
      tmpl.substr(begin + kSampleBegin.size(), end - begin - kSampleBegin.size());
  std::string body;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const std::string b = fill(block, {{"<<PROBLEM INPUT>>", s.problem},
                                       {"<<REFORMULATOR OUTPUT>>", s.reformulator_output},
                                       {"<<SOLVER FEEDBACK>>", s.feedback}});
    body += "--- SAMPLE " + std::to_string(k + 1) + (s.correct ? " (CORRECT)" : " (INCORRECT)") +
            " ---" + b;
  }
  // Drop the blank line the template leaves before the additional-samples marker.
  while (!body.empty() && body.back() == '\n') body.pop_back();
  std::string head = substitute(tmpl.substr(0, begin), "<<EXPERIENCE MEMORY>>", memory);
  return head + body + tmpl.substr(end + kSampleEnd.size());
}

std::string extract_coder_input(const std::string& prompt) {
  const std::size_t begin = prompt.find(kCoderInputHeader);
  if (begin == std::string::npos) throw SchemaError("coder prompt lacks the input header");
  const std::size_t start = begin + std::string(kCoderInputHeader).size();
  const std::size_t end = prompt.find(kSectionRule, start);
  if (end == std::string::npos) throw SchemaError("coder prompt lacks the output section");
  return prompt.substr(start, end - start);
}

}  // namespace robench
