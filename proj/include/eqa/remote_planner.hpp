#pragma once

#include <string>

#include "eqa/planner.hpp"

namespace eqa {

struct RemotePlannerConfig {
    std::string endpoint;  // http://host:port/path
    double timeout_s = 30.0;
    int retries = 2;
    int backoff_ms = 250;  // doubled per attempt
};

// POSTs the request document and returns the raw response body for
// validate_planner_output. Retries transport failures and 5xx responses with
// exponential backoff. Throws Timeout / TransportError / RetriesExhausted.
std::string remote_planner_call(const RemotePlannerConfig& cfg, const PlannerInput& input);

}  // namespace eqa
