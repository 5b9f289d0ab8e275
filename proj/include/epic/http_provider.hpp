#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "epic/errors.hpp"
#include "epic/gateway.hpp"

namespace epic {

// Chat-completions HTTP provider. Talks the common JSON wire format:
// POST <base>/chat/completions with system+user messages, reads
// choices[0].message.content and the usage token counts.
//
// Plain HTTP only; point EPIC_API_BASE at a local endpoint or proxy.
class HttpProvider : public Provider {
public:
    HttpProvider(std::string base_url, std::string api_key, std::string model)
        : api_key_(std::move(api_key)), model_(std::move(model)) {
        // split "http://host:port/prefix" into client target and path prefix
        size_t scheme = base_url.find("://");
        size_t path_start = scheme == std::string::npos ? base_url.find('/') : base_url.find('/', scheme + 3);
        if (path_start == std::string::npos) {
            host_ = base_url;
        } else {
            host_ = base_url.substr(0, path_start);
            path_prefix_ = base_url.substr(path_start);
            while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
        }
        if (host_.empty()) throw ConfigError("empty API base url");
    }

    // Reads EPIC_API_BASE, EPIC_API_KEY, EPIC_MODEL.
    static HttpProvider from_env() {
        const char* base = std::getenv("EPIC_API_BASE");
        const char* key = std::getenv("EPIC_API_KEY");
        const char* model = std::getenv("EPIC_MODEL");
        if (!base || !*base) throw ConfigError("EPIC_API_BASE is not set");
        if (!model || !*model) throw ConfigError("EPIC_MODEL is not set");
        return HttpProvider(base, key ? key : "", model);
    }

    CompletionResponse complete(const CompletionRequest& req) override {
        json body{{"model", model_},
                  {"temperature", req.temperature},
                  {"max_tokens", req.max_output_tokens},
                  {"messages", json::array({json{{"role", "system"}, {"content", req.system_text}},
                                            json{{"role", "user"}, {"content", req.user_text}}})}};
        httplib::Client cli(host_);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(120);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = cli.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
        if (!res) throw GatewayError("transport failure: " + httplib::to_string(res.error()));
        if (res->status >= 400 && res->status < 500)
            throw RequestRejectedError("request rejected with status " + std::to_string(res->status) + ": " +
                                       res->body);
        if (res->status < 200 || res->status >= 300)
            throw GatewayError("server returned status " + std::to_string(res->status));

        json parsed;
        try {
            parsed = json::parse(res->body);
        } catch (const json::exception& e) {
            throw MalformedResponseError(std::string("response is not JSON: ") + e.what());
        }
        if (!parsed.contains("choices") || parsed["choices"].empty() ||
            !parsed["choices"][0].contains("message") ||
            !parsed["choices"][0]["message"].contains("content") ||
            !parsed["choices"][0]["message"]["content"].is_string())
            throw MalformedResponseError("response carries no completion text");

        CompletionResponse out;
        out.text = parsed["choices"][0]["message"]["content"].get<std::string>();
        if (parsed.contains("usage")) {
            out.tokens_in = parsed["usage"].value("prompt_tokens", 0ull);
            out.tokens_out = parsed["usage"].value("completion_tokens", 0ull);
        } else {
            // providers that omit usage: fall back to the whitespace model
            out.tokens_in = strings::count_ws_tokens(req.system_text) + strings::count_ws_tokens(req.user_text);
            out.tokens_out = strings::count_ws_tokens(out.text);
        }
        out.provider = "http:" + model_;
        return out;
    }

    std::string model() const override { return model_; }
    bool uses_network() const override { return true; }

private:
    std::string host_;
    std::string path_prefix_;
    std::string api_key_;
    std::string model_;
};

}  // namespace epic
