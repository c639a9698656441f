#include "eqa/remote_planner.hpp"

#include <chrono>
#include <regex>
#include <thread>

#include <httplib.h>

#include "eqa/errors.hpp"

namespace eqa {

std::string remote_planner_call(const RemotePlannerConfig& cfg, const PlannerInput& input) {
    std::smatch m;
    static const std::regex url_re(R"(^(https?)://([^:/]+):(\d+)(/.*)?$)");
    if (!std::regex_match(cfg.endpoint, m, url_re))
        throw TransportError("remote planner: bad endpoint '" + cfg.endpoint + "'");
    const std::string host = m[2].str();
    const int port = std::stoi(m[3].str());
    const std::string path = m[4].matched && m[4].length() ? m[4].str() : "/";

    const std::string body = render_planner_request(input);
    std::string last_error;
    bool timed_out = false;
    const int attempts = cfg.retries + 1;

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_ms << (attempt - 1)));

        httplib::Client client(host, port);
        const auto timeout_sec = time_t(cfg.timeout_s);
        const auto timeout_usec = long((cfg.timeout_s - double(timeout_sec)) * 1e6);
        client.set_connection_timeout(timeout_sec, timeout_usec);
        client.set_read_timeout(timeout_sec, timeout_usec);

        auto res = client.Post(path, body, "application/json");
        if (res && res->status == 200) return res->body;
        if (res && res->status < 500)
            throw TransportError("remote planner: HTTP " + std::to_string(res->status));
        if (res) {
            last_error = "HTTP " + std::to_string(res->status);
            timed_out = false;
        } else {
            timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                        res.error() == httplib::Error::Read;
            last_error = httplib::to_string(res.error());
        }
    }
    if (cfg.retries == 0 && timed_out) throw Timeout("remote planner: " + last_error);
    if (cfg.retries == 0) throw TransportError("remote planner: " + last_error);
    throw RetriesExhausted("remote planner: " + std::to_string(attempts) +
                           " attempts failed; last: " + last_error);
}

}  // namespace eqa
