#include "robench/errors.hpp"
#include "robench/eval.hpp"
#include "robench/prompts.hpp"
#include "robench/rc_json.hpp"
#include "robench/reformulate.hpp"

namespace robench {

using nlohmann::json;

namespace {

const RobustInstance& need_instance(const AgentRequest& request, const char* who) {
  if (!request.instance) throw TransportError(std::string(who) + " needs the instance attached");
  return *request.instance;
}

}  // namespace

AgentReply OracleReformulator::complete(const AgentRequest& request) {
  const auto& inst = need_instance(request, "oracle reformulator");
  return {make_reply_json("Exact robust counterpart.", {}, lp::to_rc_json(reformulate(inst))), {}};
}

AgentReply NominalReformulator::complete(const AgentRequest& request) {
  const auto& inst = need_instance(request, "nominal reformulator");
  return {make_reply_json("Nominal problem, uncertainty ignored.", {},
                          lp::to_rc_json(nominal_lp(inst))),
          {}};
}

AgentReply PassThroughCoder::complete(const AgentRequest& request) {
  const std::string input = extract_coder_input(request.prompt);
  json answer;
  try {
    answer = json::parse(input);
  } catch (const json::exception&) {
    answer = input;  // not RC-JSON; verification reports a parse error
  }
  json reply = {{"reasoning", "Copied the counterpart verbatim."}, {"final_answer", answer}};
  return {reply.dump(), {}};
}

}  // namespace robench
